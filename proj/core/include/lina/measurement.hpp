#pragma once

#include "lina/dataset.hpp"
#include "lina/triad.hpp"

namespace lina {

// Confirmatory factor-analysis result under a pure measurement pattern:
// each variable loads on exactly one factor, factor variances fixed to one,
// measurement-error covariance diagonal.
struct MeasurementModel {
  Matrix loadings;        // p x q, one nonzero per row
  Vector error_variances; // diagonal Psi, length p
  ClusterSpec clusters;
  bool heywood = false;   // some Psi entry pinned to the floor
  bool converged = true;

  Eigen::Index p() const { return loadings.rows(); }
  Eigen::Index q() const { return loadings.cols(); }
};

struct FactorScores {
  Matrix scores;  // q x n
};

inline constexpr double kPsiFloor = 1e-6;

// Unweighted least-squares fit of ||S - (G G^T + Psi)||_F^2 over the free
// loadings and diagonal Psi. Sign convention: the lowest-index loading in
// each column is nonnegative.
MeasurementModel fit_cfa(const Matrix& data, const ClusterSpec& clusters);

// Unweighted projection scores (G^T G)^{-1} G^T X.
FactorScores factor_scores(const MeasurementModel& model, const Matrix& data);

// G G^T + Psi.
Matrix implied_covariance(const MeasurementModel& model);

}  // namespace lina
