#pragma once

#include "lina/measurement.hpp"
#include "lina/opt.hpp"

namespace lina {

// Weighted effects among latent factors; B(i,j) is the effect of f_j on f_i.
struct StructureModel {
  Matrix B;
  Matrix pruned_B;
  std::vector<std::string> factor_names;
  PenaltyState state;
};

struct AdaptiveWeights {
  Matrix W;  // per-entry penalty weights 1/max(|b_hat|, floor)
};

inline constexpr double kWeightFloor = 1e-3;

// Negative penalized log-likelihood pieces for the single-domain model.
// The Psi^{-1}-weighted reconstruction term is constant in B; it enters the
// value with zero gradient.
ObjectiveEvaluation neg_log_likelihood(const Matrix& B,
                                       const MeasurementModel& model,
                                       const Matrix& X);

AdaptiveWeights adaptive_weights(const MeasurementModel& model, const Matrix& X,
                                 const Hyperparams& hp);

// Laplace negative log-density of the residuals (I - B) F with gradient in B
// (flat q*q layout, zero diagonal). Shared by the single- and multi-domain
// scores.
ObjectiveEvaluation laplace_residual_term(const Matrix& B,
                                          const Matrix& factor_scores_qxn);

// lambda1-weighted smooth L1 plus lambda2 L2 on the off-diagonal of B.
ObjectiveEvaluation elastic_net_term(const Matrix& B, const AdaptiveWeights& weights,
                                     const Hyperparams& hp);

// Unpenalized maximum-likelihood effects for given factor scores; the
// pre-fit behind the adaptive-L1 weights.
Matrix fit_unpenalized_effects(const Matrix& factor_scores_qxn, double tol);

AdaptiveWeights weights_from_prefit(const Matrix& B_hat);

// F(B) = -L(B) + lambda1 * sum w_ij |B_ij|* + lambda2 * ||B||^2.
ObjectiveEvaluation score_F(const Matrix& B, const MeasurementModel& model,
                            const Matrix& X, const AdaptiveWeights& weights,
                            const Hyperparams& hp);

StructureModel fit_structure(const MeasurementModel& model, const Matrix& X,
                             const Hyperparams& hp);

// Zeroes entries with |B_ij| < eps.
Matrix prune(const Matrix& B, double eps);

}  // namespace lina
