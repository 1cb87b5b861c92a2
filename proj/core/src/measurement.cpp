#include "lina/measurement.hpp"

#include "lina/opt.hpp"

#include <cmath>

namespace lina {

namespace {

// Parameter layout: p free loadings followed by p error-variance parameters,
// with Psi = floor + t^2 keeping the variances above the Heywood floor.
struct CfaLayout {
  std::vector<int> factor_of;  // cluster column per variable
  Eigen::Index p = 0, q = 0;

  Matrix loadings(const Vector& x) const {
    Matrix G = Matrix::Zero(p, q);
    for (Eigen::Index i = 0; i < p; ++i)
      if (factor_of[i] >= 0) G(i, factor_of[i]) = x[i];
    return G;
  }
  Vector psi(const Vector& x) const {
    return (x.tail(p).array().square() + kPsiFloor).matrix();
  }
};

}  // namespace

MeasurementModel fit_cfa(const Matrix& data, const ClusterSpec& clusters) {
  const Eigen::Index p = data.rows();
  const Eigen::Index n = data.cols();
  clusters.validate(p);
  const Eigen::Index q = clusters.q();

  Matrix centered = data;
  centered.colwise() -= data.rowwise().mean();
  const Matrix S = centered * centered.transpose() / static_cast<double>(n - 1);

  CfaLayout layout;
  layout.p = p;
  layout.q = q;
  layout.factor_of.assign(p, -1);
  for (int f = 0; f < q; ++f)
    for (int v : clusters.clusters[f]) layout.factor_of[v] = f;

  // Start loadings at the square root of the largest absolute covariance with
  // a cluster sibling, signed relative to the cluster's first member (a
  // symmetric all-positive start is a saddle when siblings anticorrelate);
  // Psi at 0.5.
  Vector x0(2 * p);
  for (Eigen::Index i = 0; i < p; ++i) {
    double best = 0.0;
    const int f = layout.factor_of[i];
    double sign = 1.0;
    if (f >= 0) {
      for (int j : clusters.clusters[f])
        if (j != i) best = std::max(best, std::abs(S(i, j)));
      const int anchor = clusters.clusters[f].front();
      if (i != anchor && S(i, anchor) < 0) sign = -1.0;
    }
    x0[i] = sign * std::sqrt(std::max(best, 1e-4));
  }
  x0.tail(p).setConstant(std::sqrt(0.5 - kPsiFloor));

  auto objective = [&](const Vector& x) {
    const Matrix G = layout.loadings(x);
    const Vector psi = layout.psi(x);
    Matrix R = S - G * G.transpose();
    R.diagonal() -= psi;
    ObjectiveEvaluation ev;
    ev.value = R.squaredNorm();
    ev.gradient.resize(2 * p);
    const Matrix RG = R * G;
    for (Eigen::Index i = 0; i < p; ++i) {
      const int f = layout.factor_of[i];
      ev.gradient[i] = f >= 0 ? -4.0 * RG(i, f) : 0.0;
      ev.gradient[p + i] = -4.0 * R(i, i) * x[p + i];
    }
    return ev;
  };

  MinimizeResult res = minimize_unconstrained(objective, x0, 1e-9, 2000);
  if (!std::isfinite(res.value)) throw NonConvergence("CFA objective diverged");

  MeasurementModel model;
  model.loadings = layout.loadings(res.x);
  model.error_variances = layout.psi(res.x);
  model.clusters = clusters;
  model.converged = res.line_search_ok;
  model.heywood = (model.error_variances.array() < 10.0 * kPsiFloor).any();

  // Sign convention: lowest-index loading in each column is nonnegative.
  for (int f = 0; f < q; ++f) {
    int lead = *std::min_element(clusters.clusters[f].begin(),
                                 clusters.clusters[f].end());
    if (model.loadings(lead, f) < 0) model.loadings.col(f) *= -1.0;
  }
  return model;
}

FactorScores factor_scores(const MeasurementModel& model, const Matrix& data) {
  if (data.rows() != model.p())
    throw DimensionMismatch("factor_scores: data rows must match loadings");
  const Matrix gram = model.loadings.transpose() * model.loadings;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.eigenvalues().minCoeff() <= 1e-10) throw RankDeficientLoadings();
  const Matrix gram_inv = eig.eigenvectors() *
                          eig.eigenvalues().cwiseInverse().asDiagonal() *
                          eig.eigenvectors().transpose();
  FactorScores fs;
  fs.scores = gram_inv * (model.loadings.transpose() * data);
  return fs;
}

Matrix implied_covariance(const MeasurementModel& model) {
  Matrix sigma = model.loadings * model.loadings.transpose();
  sigma.diagonal() += model.error_variances;
  return sigma;
}

}  // namespace lina
