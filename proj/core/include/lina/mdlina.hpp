#pragma once

#include "lina/structure.hpp"

namespace lina {

// Maps interest factors to augmented factors: f_bar = H f_tilde.
struct TransformMatrix {
  Matrix H;  // q x q_tilde, full column rank

  Eigen::Index q() const { return H.rows(); }
  Eigen::Index q_tilde() const { return H.cols(); }
};

// One interest factor per augmented-factor row (A4), with the kept weight.
struct HardAssignment {
  std::vector<int> row_to_interest;
  std::vector<double> kept_weight;
};

struct MdStructureModel {
  Matrix B_tilde;
  Matrix pruned_B_tilde;
  TransformMatrix H;
  HardAssignment assignment;
  PenaltyState state;
};

// ||F_bar - P_H F_bar||_F^2 with P_H = H (H^T H)^{-1} H^T, plus the analytic
// gradient with respect to H.
std::pair<double, Matrix> reconstruction_error(const TransformMatrix& H,
                                               const FactorScores& Fbar);

struct MdObjectiveEvaluation {
  double value = 0.0;
  Matrix grad_B;
  Matrix grad_H;
};

// Joint multi-domain score: Laplace likelihood of the interest-factor
// residuals, adaptive L1 + L2 on B_tilde, reconstruction error and adaptive
// L1 on H. `recon_const` carries the X_bar reconstruction term, which is
// constant in both parameter blocks.
MdObjectiveEvaluation md_score(const Matrix& B_tilde, const TransformMatrix& H,
                               const FactorScores& Fbar,
                               const AdaptiveWeights& weights_B,
                               const AdaptiveWeights& weights_H,
                               const Hyperparams& hp,
                               double recon_const = 0.0);

HardAssignment harden_H(const TransformMatrix& H);

// Refit of B_tilde with H frozen at its hardened indicator form, then pruned.
Matrix update_b_tilde(const HardAssignment& assignment, const FactorScores& Fbar,
                      const Hyperparams& hp);

// Alternating H / B_tilde optimization (Phase II, M > 1). Each augmented
// factor's domain of origin, needed for the deterministic H warm start, is
// read off the cluster pattern and the augmented row bookkeeping.
MdStructureModel fit_md(const MeasurementModel& model,
                        const AugmentedDataset& Xbar, int q_tilde,
                        const Hyperparams& hp);

}  // namespace lina
