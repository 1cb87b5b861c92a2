#pragma once

#include <lina/opt.hpp>

#include <algorithm>
#include <random>
#include <vector>

namespace testutil {

inline lina::Matrix random_matrix(Eigen::Index r, Eigen::Index c, unsigned seed,
                                  double scale = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  lina::Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = u(rng);
  return m;
}

// Central finite differences against an analytic gradient; returns the max
// relative error over coordinates (relative to max(1, |fd|)).
inline double fd_max_rel_error(const lina::Objective& f, const lina::Vector& x,
                               double step = 1e-5) {
  const lina::ObjectiveEvaluation ev = f(x);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    lina::Vector xp = x, xm = x;
    xp[k] += step;
    xm[k] -= step;
    const double fd = (f(xp).value - f(xm).value) / (2.0 * step);
    const double denom = std::max(1.0, std::abs(fd));
    worst = std::max(worst, std::abs(ev.gradient[k] - fd) / denom);
  }
  return worst;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace testutil
