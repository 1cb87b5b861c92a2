#include "lina/triad.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace lina {

void ClusterSpec::validate(Eigen::Index p) const {
  std::vector<bool> seen(p, false);
  for (const auto& c : clusters) {
    if (c.size() < 2) throw Error("every cluster needs at least 2 pure indicators");
    for (int v : c) {
      if (v < 0 || v >= p) throw Error("cluster index out of range");
      if (seen[v]) throw Error("clusters must be disjoint");
      seen[v] = true;
    }
  }
}

namespace {

double sample_cov(const Vector& a, const Vector& b) {
  const Eigen::Index n = a.size();
  const double ma = a.mean(), mb = b.mean();
  return (a.array() - ma).matrix().dot((b.array() - mb).matrix()) /
         static_cast<double>(n - 1);
}

double sample_corr(const Vector& a, const Vector& b) {
  const double c = sample_cov(a, b);
  const double va = sample_cov(a, a), vb = sample_cov(b, b);
  if (va <= 0 || vb <= 0) return 0.0;
  return c / std::sqrt(va * vb);
}

Vector stride_subsample(const Vector& v, int max_samples) {
  const Eigen::Index n = v.size();
  if (n <= max_samples) return v;
  Vector out(max_samples);
  for (int i = 0; i < max_samples; ++i) {
    const Eigen::Index idx = static_cast<Eigen::Index>(
        static_cast<double>(i) * static_cast<double>(n) / max_samples);
    out[i] = v[std::min(idx, n - 1)];
  }
  return out;
}

double median_bandwidth(const Vector& v) {
  const Eigen::Index m = v.size();
  std::vector<double> dists;
  dists.reserve(static_cast<size_t>(m) * (m - 1) / 2);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double d = std::abs(v[i] - v[j]);
      if (d > 0) dists.push_back(d);
    }
  if (dists.empty()) return 1.0;
  const size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
  return dists[mid];
}

Matrix gaussian_gram(const Vector& v, double sigma) {
  const Eigen::Index m = v.size();
  Matrix K(m, m);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double d = v[i] - v[j];
      K(i, j) = K(j, i) = std::exp(-d * d * inv);
    }
  return K;
}

}  // namespace

Vector pseudo_residual(const Vector& xi, const Vector& xj, const Vector& xk) {
  if (xi.size() != xj.size() || xi.size() != xk.size())
    throw DimensionMismatch("pseudo_residual needs equal-length series");
  if (xi.size() < 3) throw Error("pseudo_residual needs at least 3 samples");
  const double cjk = sample_cov(xj, xk);
  if (std::abs(cjk) <= 1e-10) throw DegenerateReference();
  const double ratio = sample_cov(xi, xk) / cjk;
  return xi - ratio * xj;
}

double independence_test(const Vector& u, const Vector& v,
                         const IndependenceTestConfig& cfg) {
  if (u.size() != v.size()) throw DimensionMismatch("independence_test needs equal lengths");
  if (u.size() < 50) throw InsufficientSamples(u.size());

  const Vector us = stride_subsample(u, cfg.max_test_samples);
  const Vector vs = stride_subsample(v, cfg.max_test_samples);
  const Eigen::Index m = us.size();
  const double md = static_cast<double>(m);

  const double su = cfg.fixed_bandwidth > 0 ? cfg.fixed_bandwidth : median_bandwidth(us);
  const double sv = cfg.fixed_bandwidth > 0 ? cfg.fixed_bandwidth : median_bandwidth(vs);
  Matrix K = gaussian_gram(us, su);
  Matrix L = gaussian_gram(vs, sv);

  // Centered Gram matrices Kc = H K H.
  auto center = [m](Matrix& A) {
    const Vector rm = A.rowwise().mean();
    const double tm = rm.mean();
    A.colwise() -= rm;
    A.rowwise() -= rm.transpose();
    A.array() += tm;
    (void)m;
  };
  Matrix Kc = K, Lc = L;
  center(Kc);
  center(Lc);

  // Biased statistic m * HSIC_b = (1/m) sum(Kc o Lc).
  const double test_stat = Kc.cwiseProduct(Lc).sum() / md;

  // Gamma null approximation (moment matching of the biased statistic).
  Matrix var_term = (Kc.cwiseProduct(Lc) / 6.0).array().square();
  double var_hsic = (var_term.sum() - var_term.trace()) / (md * (md - 1.0));
  var_hsic *= 72.0 * (md - 4.0) * (md - 5.0) /
              (md * (md - 1.0) * (md - 2.0) * (md - 3.0));

  const double mu_x = (K.sum() - K.trace()) / (md * (md - 1.0));
  const double mu_y = (L.sum() - L.trace()) / (md * (md - 1.0));
  const double mean_hsic = (1.0 + mu_x * mu_y - mu_x - mu_y) / md;

  if (!(var_hsic > 0.0) || !(mean_hsic > 0.0)) {
    return test_stat > mean_hsic ? 0.0 : 1.0;
  }
  const double shape = mean_hsic * mean_hsic / var_hsic;
  const double scale = var_hsic * md / mean_hsic;
  const double p = 1.0 - boost::math::gamma_p(shape, std::max(test_stat, 0.0) / scale);
  return std::clamp(p, 0.0, 1.0);
}

namespace {
constexpr double kCorrThreshold = 0.05;
}

bool triad_violated(int i, int j, int k, const DomainDataset& data,
                    const IndependenceTestConfig& cfg) {
  if (i == j || i == k || j == k) throw Error("triad indices must be distinct");
  const Vector xi = data.data.row(i).transpose();
  const Vector xj = data.data.row(j).transpose();
  const Vector xk = data.data.row(k).transpose();
  if (std::abs(sample_corr(xi, xj)) <= kCorrThreshold ||
      std::abs(sample_corr(xi, xk)) <= kCorrThreshold ||
      std::abs(sample_corr(xj, xk)) <= kCorrThreshold)
    throw UncorrelatedTriple();
  const Vector e = pseudo_residual(xi, xj, xk);
  return independence_test(e, xk, cfg) < cfg.alpha;
}

ClusterSpec locate_clusters(const DomainDataset& data,
                            const IndependenceTestConfig& cfg) {
  const int p = static_cast<int>(data.p());
  Matrix corr(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j <= i; ++j)
      corr(i, j) = corr(j, i) =
          sample_corr(data.data.row(i).transpose(), data.data.row(j).transpose());

  // Union-find over pure-compatible pairs.
  std::vector<int> parent(p);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };

  bool any_pair = false;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      if (std::abs(corr(i, j)) <= kCorrThreshold) continue;
      bool compatible = true;
      for (int k = 0; k < p && compatible; ++k) {
        if (k == i || k == j) continue;
        if (std::abs(corr(i, k)) <= kCorrThreshold ||
            std::abs(corr(j, k)) <= kCorrThreshold)
          continue;
        if (triad_violated(i, j, k, data, cfg) ||
            triad_violated(j, i, k, data, cfg))
          compatible = false;
      }
      if (compatible) {
        any_pair = true;
        parent[find(i)] = find(j);
      }
    }
  }
  if (!any_pair) throw NoClustersFound();

  std::vector<std::vector<int>> groups(p);
  for (int i = 0; i < p; ++i) groups[find(i)].push_back(i);
  ClusterSpec spec;
  for (auto& g : groups)
    if (g.size() >= 2) spec.clusters.push_back(std::move(g));
  return spec;
}

Direction pairwise_direction(const std::vector<int>& c1, const std::vector<int>& c2,
                             const DomainDataset& data,
                             const IndependenceTestConfig& cfg) {
  if (c1.size() < 2 || c2.size() < 2)
    throw Error("pairwise_direction needs clusters with >= 2 members");

  // One indicator from the candidate cause, two from the candidate effect.
  auto side_votes = [&](const std::vector<int>& cause, const std::vector<int>& effect,
                        int& violated, int& total, double& mean_p) {
    violated = 0;
    total = 0;
    double psum = 0.0;
    for (int a : cause) {
      for (size_t b = 0; b < effect.size(); ++b) {
        for (size_t c = 0; c < effect.size(); ++c) {
          if (b == c) continue;
          const Vector xi = data.data.row(a).transpose();
          const Vector xj = data.data.row(effect[b]).transpose();
          const Vector xk = data.data.row(effect[c]).transpose();
          const Vector e = pseudo_residual(xi, xj, xk);
          const double p = independence_test(e, xk, cfg);
          psum += p;
          if (p < cfg.alpha) ++violated;
          ++total;
        }
      }
    }
    mean_p = total > 0 ? psum / total : 1.0;
  };

  int v12, t12, v21, t21;
  double p12, p21;
  side_votes(c1, c2, v12, t12, p12);
  side_votes(c2, c1, v21, t21, p21);

  auto majority = [&](int v, int t, double mp) {
    if (2 * v > t) return true;
    if (2 * v == t) return mp < cfg.alpha;
    return false;
  };
  const bool forward = majority(v12, t12, p12);   // violation with cause side c1
  const bool backward = majority(v21, t21, p21);

  if (forward && !backward) return Direction::C1ToC2;
  if (backward && !forward) return Direction::C2ToC1;
  return Direction::Undecided;
}

}  // namespace lina
