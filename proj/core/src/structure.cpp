#include "lina/structure.hpp"

#include <cmath>

namespace lina {

namespace {

struct LikelihoodContext {
  Matrix fhat;        // q x n estimated factor scores
  double recon = 0.0; // Psi^{-1}-weighted reconstruction term, constant in B
};

LikelihoodContext make_context(const MeasurementModel& model, const Matrix& X) {
  if (X.rows() != model.p())
    throw DimensionMismatch("neg_log_likelihood: data rows must match loadings");
  LikelihoodContext ctx;
  ctx.fhat = factor_scores(model, X).scores;
  const Matrix resid = X - model.loadings * ctx.fhat;
  for (Eigen::Index i = 0; i < resid.rows(); ++i)
    ctx.recon += 0.5 * resid.row(i).squaredNorm() / model.error_variances[i];
  return ctx;
}

}  // namespace

// Laplace part of -L and its gradient in B, for residuals (I - B) fhat.
ObjectiveEvaluation laplace_residual_term(const Matrix& B, const Matrix& fhat) {
  const Eigen::Index q = B.rows();
  const Matrix eps = fhat - B * fhat;
  double value = 0.0;
  Matrix deriv(eps.rows(), eps.cols());
  const double sqrt2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < eps.rows(); ++i)
    for (Eigen::Index t = 0; t < eps.cols(); ++t) {
      const auto [v, d] = smooth_abs(eps(i, t));
      value += sqrt2 * v;
      deriv(i, t) = sqrt2 * d;
    }
  Matrix grad = -deriv * fhat.transpose();
  grad.diagonal().setZero();
  ObjectiveEvaluation ev;
  ev.value = value;
  ev.gradient = Eigen::Map<Vector>(grad.data(), q * q);
  return ev;
}

ObjectiveEvaluation elastic_net_term(const Matrix& B, const AdaptiveWeights& weights,
                                     const Hyperparams& hp) {
  const Eigen::Index q = B.rows();
  ObjectiveEvaluation ev;
  ev.value = 0.0;
  Matrix grad = Matrix::Zero(q, q);
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j) {
      if (i == j) continue;
      const auto [v, d] = smooth_abs(B(i, j));
      ev.value += hp.lambda1 * weights.W(i, j) * v + hp.lambda2 * B(i, j) * B(i, j);
      grad(i, j) = hp.lambda1 * weights.W(i, j) * d + 2.0 * hp.lambda2 * B(i, j);
    }
  ev.gradient = Eigen::Map<Vector>(grad.data(), q * q);
  return ev;
}

Matrix fit_unpenalized_effects(const Matrix& factor_scores_qxn, double tol) {
  const Eigen::Index q = factor_scores_qxn.rows();
  auto objective = [&](const Vector& v) {
    const Matrix B = unpack_offdiag(v, q);
    ObjectiveEvaluation ev = laplace_residual_term(B, factor_scores_qxn);
    Matrix g = Eigen::Map<Matrix>(ev.gradient.data(), q, q);
    ObjectiveEvaluation out;
    out.value = ev.value;
    out.gradient = pack_offdiag(g);
    return out;
  };
  MinimizeResult res =
      minimize_unconstrained(objective, Vector::Zero(q * q - q), tol, 500);
  return unpack_offdiag(res.x, q);
}

AdaptiveWeights weights_from_prefit(const Matrix& B_hat) {
  AdaptiveWeights w;
  w.W = B_hat.cwiseAbs().cwiseMax(kWeightFloor).cwiseInverse();
  return w;
}

ObjectiveEvaluation neg_log_likelihood(const Matrix& B, const MeasurementModel& model,
                                       const Matrix& X) {
  const LikelihoodContext ctx = make_context(model, X);
  ObjectiveEvaluation ev = laplace_residual_term(B, ctx.fhat);
  ev.value += ctx.recon;
  return ev;
}

AdaptiveWeights adaptive_weights(const MeasurementModel& model, const Matrix& X,
                                 const Hyperparams& hp) {
  const LikelihoodContext ctx = make_context(model, X);
  return weights_from_prefit(fit_unpenalized_effects(ctx.fhat, hp.solver_tol));
}

ObjectiveEvaluation score_F(const Matrix& B, const MeasurementModel& model,
                            const Matrix& X, const AdaptiveWeights& weights,
                            const Hyperparams& hp) {
  ObjectiveEvaluation ev = neg_log_likelihood(B, model, X);
  const ObjectiveEvaluation pen = elastic_net_term(B, weights, hp);
  ev.value += pen.value;
  ev.gradient += pen.gradient;
  return ev;
}

StructureModel fit_structure(const MeasurementModel& model, const Matrix& X,
                             const Hyperparams& hp) {
  hp.validate();
  const Eigen::Index q = model.q();
  const LikelihoodContext ctx = make_context(model, X);

  const AdaptiveWeights weights =
      weights_from_prefit(fit_unpenalized_effects(ctx.fhat, hp.solver_tol));

  auto score = [&](const Matrix& B) {
    ObjectiveEvaluation ev = laplace_residual_term(B, ctx.fhat);
    ev.value += ctx.recon;
    const ObjectiveEvaluation pen = elastic_net_term(B, weights, hp);
    ev.value += pen.value;
    ev.gradient += pen.gradient;
    return ev;
  };

  auto [B, state] = penalty_loop(score, hp, Matrix::Zero(q, q));

  StructureModel out;
  out.B = B;
  out.pruned_B = prune(B, hp.threshold_eps);
  out.state = state;
  out.factor_names.reserve(q);
  for (Eigen::Index f = 0; f < q; ++f)
    out.factor_names.push_back("f" + std::to_string(f + 1));
  return out;
}

Matrix prune(const Matrix& B, double eps) {
  if (eps < 0) throw Error("prune threshold must be nonnegative");
  return (B.cwiseAbs().array() < eps).select(Matrix::Zero(B.rows(), B.cols()), B);
}

}  // namespace lina
