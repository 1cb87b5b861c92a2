#include "lina/mdlina.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lina {

namespace {

struct HFactorization {
  Matrix S_inv;    // (H^T H)^{-1}
  Matrix K;        // (H^T H)^{-1} H^T
  Matrix P;        // H (H^T H)^{-1} H^T
  bool full_rank = true;
};

HFactorization factorize(const Matrix& H) {
  HFactorization f;
  const Matrix S = H.transpose() * H;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
  if (eig.eigenvalues().minCoeff() <= 1e-20) {
    f.full_rank = false;
    return f;
  }
  f.S_inv = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
            eig.eigenvectors().transpose();
  f.K = f.S_inv * H.transpose();
  f.P = H * f.K;
  return f;
}

// Weighted smooth-L1 on all entries of H.
ObjectiveEvaluation h_sparsity_term(const Matrix& H, const AdaptiveWeights& weights,
                                    double lambda3) {
  ObjectiveEvaluation ev;
  Matrix grad = Matrix::Zero(H.rows(), H.cols());
  for (Eigen::Index i = 0; i < H.rows(); ++i)
    for (Eigen::Index j = 0; j < H.cols(); ++j) {
      const auto [v, d] = smooth_abs(H(i, j));
      ev.value += lambda3 * weights.W(i, j) * v;
      grad(i, j) = lambda3 * weights.W(i, j) * d;
    }
  ev.gradient = Eigen::Map<Vector>(grad.data(), H.size());
  return ev;
}

}  // namespace

std::pair<double, Matrix> reconstruction_error(const TransformMatrix& H,
                                               const FactorScores& Fbar) {
  if (H.H.rows() != Fbar.scores.rows())
    throw DimensionMismatch("reconstruction_error: H rows must match factor count");
  const HFactorization f = factorize(H.H);
  if (!f.full_rank) throw RankDeficientH();
  const Matrix& F = Fbar.scores;
  const Matrix R = F - f.P * F;
  const double value = R.squaredNorm();
  const Matrix C = F * F.transpose();
  const Matrix grad = -2.0 * (C - f.P * C) * H.H * f.S_inv;
  return {value, grad};
}

MdObjectiveEvaluation md_score(const Matrix& B_tilde, const TransformMatrix& H,
                               const FactorScores& Fbar,
                               const AdaptiveWeights& weights_B,
                               const AdaptiveWeights& weights_H,
                               const Hyperparams& hp, double recon_const) {
  const Eigen::Index q = H.q();
  const Eigen::Index qt = H.q_tilde();
  if (B_tilde.rows() != qt || B_tilde.cols() != qt)
    throw DimensionMismatch("md_score: B_tilde must be q_tilde x q_tilde");
  if (Fbar.scores.rows() != q)
    throw DimensionMismatch("md_score: factor scores must have q rows");

  const HFactorization f = factorize(H.H);
  MdObjectiveEvaluation out;
  if (!f.full_rank) {
    out.value = std::numeric_limits<double>::infinity();
    out.grad_B = Matrix::Zero(qt, qt);
    out.grad_H = Matrix::Zero(q, qt);
    return out;
  }

  const Matrix& F = Fbar.scores;
  const Matrix Ftilde = f.K * F;

  // Laplace likelihood of the interest-factor residuals (I - B~) f~.
  const Matrix eps = Ftilde - B_tilde * Ftilde;
  double lap = 0.0;
  Matrix D(eps.rows(), eps.cols());
  const double sqrt2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < eps.rows(); ++i)
    for (Eigen::Index t = 0; t < eps.cols(); ++t) {
      const auto [v, d] = smooth_abs(eps(i, t));
      lap += sqrt2 * v;
      D(i, t) = sqrt2 * d;
    }

  Matrix grad_B = -D * Ftilde.transpose();
  grad_B.diagonal().setZero();
  const ObjectiveEvaluation pen_B = elastic_net_term(B_tilde, weights_B, hp);
  grad_B += Eigen::Map<const Matrix>(pen_B.gradient.data(), qt, qt);

  // Gradient of the Laplace term in H through K = (H^T H)^{-1} H^T.
  const Matrix IB = Matrix::Identity(qt, qt) - B_tilde;
  const Matrix M = IB.transpose() * D * F.transpose();  // dL/dK, q_tilde x q
  const Matrix Mt_Sinv = M.transpose() * f.S_inv;       // q x q_tilde
  Matrix grad_H = Mt_Sinv - f.P * Mt_Sinv - H.H * f.S_inv * M * H.H * f.S_inv;

  auto [e_val, e_grad] = reconstruction_error(H, Fbar);
  grad_H += e_grad;
  const ObjectiveEvaluation pen_H = h_sparsity_term(H.H, weights_H, hp.lambda3);
  grad_H += Eigen::Map<const Matrix>(pen_H.gradient.data(), q, qt);

  out.value = recon_const + lap + pen_B.value + e_val + pen_H.value;
  out.grad_B = grad_B;
  out.grad_H = grad_H;
  return out;
}

HardAssignment harden_H(const TransformMatrix& H) {
  const Eigen::Index q = H.q();
  const Eigen::Index qt = H.q_tilde();
  HardAssignment a;
  a.row_to_interest.resize(q);
  a.kept_weight.resize(q);
  std::vector<bool> occupied(qt, false);
  for (Eigen::Index i = 0; i < q; ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < qt; ++j)
      if (std::abs(H.H(i, j)) > std::abs(H.H(i, best))) best = j;
    a.row_to_interest[i] = static_cast<int>(best);
    a.kept_weight[i] = H.H(i, best);
    occupied[best] = true;
  }
  for (Eigen::Index j = 0; j < qt; ++j)
    if (!occupied[j]) throw AssignmentInfeasible(static_cast<int>(j));
  return a;
}

namespace {

Matrix hard_matrix(const HardAssignment& a) {
  const Eigen::Index q = static_cast<Eigen::Index>(a.row_to_interest.size());
  int qt = 0;
  for (int j : a.row_to_interest) qt = std::max(qt, j + 1);
  Matrix H = Matrix::Zero(q, qt);
  for (Eigen::Index i = 0; i < q; ++i)
    H(i, a.row_to_interest[i]) = a.kept_weight[i];
  return H;
}

// Penalized refit of B~ for frozen H, shared by the alternation and the
// final hardened update.
std::pair<Matrix, PenaltyState> refit_b_tilde(const Matrix& Ftilde,
                                              const AdaptiveWeights& weights,
                                              const Hyperparams& hp,
                                              const Matrix& B0) {
  auto score = [&](const Matrix& B) {
    ObjectiveEvaluation ev = laplace_residual_term(B, Ftilde);
    const ObjectiveEvaluation pen = elastic_net_term(B, weights, hp);
    ev.value += pen.value;
    ev.gradient += pen.gradient;
    return ev;
  };
  return penalty_loop(score, hp, B0);
}

// Gauge fix: P_H, the hardened assignment and the B~ support are invariant
// to column scaling of H, but the Laplace term is not (inflating H deflates
// the interest-factor residuals without bound). Pinning each interest factor
// f~_j to unit sample variance removes that degenerate direction.
void fix_gauge(Matrix& H, const Matrix& Fbar_scores) {
  const HFactorization f = factorize(H);
  if (!f.full_rank) return;
  const Matrix Ftilde = f.K * Fbar_scores;
  const Eigen::Index n = Ftilde.cols();
  if (n < 2) return;
  for (Eigen::Index j = 0; j < H.cols(); ++j) {
    const double mean = Ftilde.row(j).mean();
    const double sd = std::sqrt((Ftilde.row(j).array() - mean).matrix().squaredNorm() /
                                static_cast<double>(n - 1));
    if (sd > 1e-12) H.col(j) *= sd;
  }
}

}  // namespace

Matrix update_b_tilde(const HardAssignment& assignment, const FactorScores& Fbar,
                      const Hyperparams& hp) {
  const Matrix H = hard_matrix(assignment);
  const HFactorization f = factorize(H);
  if (!f.full_rank) throw RankDeficientH();
  const Matrix Ftilde = f.K * Fbar.scores;
  const AdaptiveWeights weights =
      weights_from_prefit(fit_unpenalized_effects(Ftilde, hp.solver_tol));
  auto [B, state] = refit_b_tilde(Ftilde, weights, hp, Matrix::Zero(H.cols(), H.cols()));
  return prune(B, hp.threshold_eps);
}

namespace {

// Deterministic warm start for H consistent with A4: each augmented factor
// row starts on the interest factor matching its within-domain position.
// Per-domain signs are aligned from unpenalized per-domain effect estimates,
// because the CFA sign convention fixes each domain's factor signs
// independently of its cross-domain twins.
Matrix initial_H(const FactorScores& Fbar, const std::vector<int>& factor_domain,
                 const std::vector<std::vector<Eigen::Index>>& factor_cols,
                 int q_tilde, const Hyperparams& hp) {
  const double tol = hp.solver_tol;
  const Eigen::Index q = Fbar.scores.rows();

  // Within-domain index of each factor.
  std::vector<int> within(q, 0);
  {
    std::vector<int> count;
    for (Eigen::Index i = 0; i < q; ++i) {
      const int m = factor_domain[i];
      if (m >= static_cast<int>(count.size())) count.resize(m + 1, 0);
      within[i] = count[m]++;
    }
  }

  Matrix H = Matrix::Zero(q, q_tilde);
  for (Eigen::Index i = 0; i < q; ++i) H(i, within[i] % q_tilde) = 1.0;

  // Per-domain effect estimates on the domain's own samples.
  std::vector<int> domain_ids;
  for (int m : factor_domain)
    if (std::find(domain_ids.begin(), domain_ids.end(), m) == domain_ids.end())
      domain_ids.push_back(m);
  if (domain_ids.size() < 2) return H;

  std::vector<Matrix> B_dom(domain_ids.size());
  std::vector<std::vector<Eigen::Index>> rows_of(domain_ids.size());
  for (size_t d = 0; d < domain_ids.size(); ++d) {
    for (Eigen::Index i = 0; i < q; ++i)
      if (factor_domain[i] == domain_ids[d]) rows_of[d].push_back(i);
    const auto& cols = factor_cols[d];
    Matrix Fd(rows_of[d].size(), cols.size());
    for (size_t r = 0; r < rows_of[d].size(); ++r)
      for (size_t c = 0; c < cols.size(); ++c)
        Fd(r, c) = Fbar.scores(rows_of[d][r], cols[c]);
    for (Eigen::Index r = 0; r < Fd.rows(); ++r) {
      const double mu = Fd.row(r).mean();
      const double sd = std::sqrt((Fd.row(r).array() - mu).matrix().squaredNorm() /
                                  static_cast<double>(Fd.cols() - 1));
      if (sd > 1e-12) Fd.row(r) = (Fd.row(r).array() - mu) / sd;
    }
    // Directed (acyclicity-penalized) fit: the unpenalized estimate is a
    // near-symmetric bidirectional regression and cannot separate a twin
    // permutation from its reverse.
    const AdaptiveWeights wd =
        weights_from_prefit(fit_unpenalized_effects(Fd, tol));
    B_dom[d] = refit_b_tilde(Fd, wd, hp,
                             Matrix::Zero(Fd.rows(), Fd.rows())).first;
  }

  // Align each later domain against domain 0 by exhaustive signed-permutation
  // search over the per-domain effect estimates: factor r of domain d plays
  // domain-0 factor perm[r] with sign s[r]. Cross-domain twins never share
  // samples under the block coding, so their correspondence is only visible
  // in the causal roles, not in any score correlation. A global sign flip is
  // equivalent, so the first sign is pinned. Skipped for mismatched factor
  // counts; sign-only search for larger q.
  const Eigen::Index q0 = B_dom[0].rows();
  for (size_t d = 1; d < domain_ids.size(); ++d) {
    const Eigen::Index qd = B_dom[d].rows();
    if (qd != q0 || qd > 12) continue;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<double> best_signs(qd, 1.0);
    std::vector<int> best_perm(qd);
    std::iota(best_perm.begin(), best_perm.end(), 0);

    std::vector<int> perm(qd);
    std::iota(perm.begin(), perm.end(), 0);
    const bool search_perms = qd <= 6;
    do {
      for (long mask = 0; mask < (1L << (qd - 1)); ++mask) {
        std::vector<double> s(qd, 1.0);
        for (Eigen::Index j = 1; j < qd; ++j)
          if (mask & (1L << (j - 1))) s[j] = -1.0;
        double cost = 0.0;
        for (Eigen::Index i = 0; i < qd; ++i)
          for (Eigen::Index j = 0; j < qd; ++j) {
            const double diff =
                s[i] * s[j] * B_dom[d](i, j) - B_dom[0](perm[i], perm[j]);
            cost += diff * diff;
          }
        if (cost < best_cost) {
          best_cost = cost;
          best_signs = s;
          best_perm = perm;
        }
      }
    } while (search_perms && std::next_permutation(perm.begin(), perm.end()));

    for (Eigen::Index r = 0; r < qd; ++r) {
      H.row(rows_of[d][r]).setZero();
      H(rows_of[d][r], best_perm[r] % q_tilde) = best_signs[r];
    }
  }
  return H;
}

}  // namespace

MdStructureModel fit_md(const MeasurementModel& model, const AugmentedDataset& Xbar,
                        int q_tilde, const Hyperparams& hp) {
  hp.validate();
  const Eigen::Index q = model.q();
  if (q_tilde < 1 || q_tilde > q)
    throw Error("q_tilde must lie in [1, q]");

  const FactorScores Fbar = factor_scores(model, Xbar.data);

  // Constant reconstruction term of the augmented data.
  double recon_const = 0.0;
  {
    const Matrix resid = Xbar.data - model.loadings * Fbar.scores;
    for (Eigen::Index i = 0; i < resid.rows(); ++i)
      recon_const += 0.5 * resid.row(i).squaredNorm() / model.error_variances[i];
  }

  // Domain of origin per factor, and each domain's sample columns.
  std::vector<int> factor_domain(q);
  for (Eigen::Index f = 0; f < q; ++f)
    factor_domain[f] = Xbar.row_domain[model.clusters.clusters[f].front()];
  std::vector<int> domain_ids;
  for (int m : factor_domain)
    if (std::find(domain_ids.begin(), domain_ids.end(), m) == domain_ids.end())
      domain_ids.push_back(m);
  std::vector<std::vector<Eigen::Index>> factor_cols(domain_ids.size());
  for (Eigen::Index t = 0; t < Xbar.data.cols(); ++t)
    for (size_t d = 0; d < domain_ids.size(); ++d)
      if (Xbar.col_domain[t] == domain_ids[d]) factor_cols[d].push_back(t);

  TransformMatrix H{initial_H(Fbar, factor_domain, factor_cols, q_tilde, hp)};
  fix_gauge(H.H, Fbar.scores);

  // A4 as a hard constraint: the search keeps the warm start's one nonzero
  // per row and optimizes only those entries. The unconstrained objective's
  // global minimizer groups within-domain factors (twins never share samples
  // under the block coding, so nothing in E(H) or the likelihood couples
  // them), which violates A4 and destroys the cross-domain linkage.
  std::vector<int> pattern(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    int col = 0;
    for (Eigen::Index j = 1; j < q_tilde; ++j)
      if (std::abs(H.H(i, j)) > std::abs(H.H(i, col))) col = static_cast<int>(j);
    pattern[i] = col;
  }

  // Adaptive weights for both blocks from unpenalized pre-fits at the warm
  // start.
  const HFactorization f0 = factorize(H.H);
  if (!f0.full_rank) throw RankDeficientH();
  const AdaptiveWeights weights_B = weights_from_prefit(
      fit_unpenalized_effects(f0.K * Fbar.scores, hp.solver_tol));
  const AdaptiveWeights weights_H = weights_from_prefit(H.H);

  Matrix B = Matrix::Zero(q_tilde, q_tilde);
  PenaltyState state;
  double prev_value = std::numeric_limits<double>::infinity();

  for (int round = 0; round < hp.max_alt; ++round) {
    // (i) H step over the pattern entries, warm-started.
    auto h_objective = [&](const Vector& v) {
      TransformMatrix Hv{Matrix::Zero(q, q_tilde)};
      for (Eigen::Index i = 0; i < q; ++i) Hv.H(i, pattern[i]) = v[i];
      MdObjectiveEvaluation ev =
          md_score(B, Hv, Fbar, weights_B, weights_H, hp, recon_const);
      ObjectiveEvaluation out;
      out.value = ev.value;
      out.gradient = Vector::Zero(q);
      if (std::isfinite(ev.value))
        for (Eigen::Index i = 0; i < q; ++i)
          out.gradient[i] = ev.grad_H(i, pattern[i]);
      return out;
    };
    Vector h0(q);
    for (Eigen::Index i = 0; i < q; ++i) h0[i] = H.H(i, pattern[i]);
    // One accepted descent step per round; a full inner minimization walks
    // into the degenerate optimum that zeroes whole domains out of H.
    MinimizeResult hres =
        minimize_unconstrained(h_objective, h0, hp.solver_tol, 1);
    H.H.setZero();
    for (Eigen::Index i = 0; i < q; ++i) H.H(i, pattern[i]) = hres.x[i];
    fix_gauge(H.H, Fbar.scores);

    // (ii) B~ step under the acyclicity penalty, for the frozen H.
    const HFactorization fh = factorize(H.H);
    if (!fh.full_rank) throw RankDeficientH();
    const Matrix Ftilde = fh.K * Fbar.scores;
    std::tie(B, state) = refit_b_tilde(Ftilde, weights_B, hp, B);

    const double value =
        md_score(B, H, Fbar, weights_B, weights_H, hp, recon_const).value;
    if (std::abs(prev_value - value) <= 1e-6 * std::max(1.0, std::abs(prev_value)))
      break;
    prev_value = value;
  }

  MdStructureModel out;
  out.H = H;
  out.assignment = harden_H(H);

  // Final update with the hardened H (A4).
  const Matrix H_hard = hard_matrix(out.assignment);
  const HFactorization fh = factorize(H_hard);
  if (!fh.full_rank) throw RankDeficientH();
  const Matrix Ftilde = fh.K * Fbar.scores;
  const AdaptiveWeights weights_final =
      weights_from_prefit(fit_unpenalized_effects(Ftilde, hp.solver_tol));
  std::tie(out.B_tilde, out.state) =
      refit_b_tilde(Ftilde, weights_final, hp, Matrix::Zero(q_tilde, q_tilde));
  out.pruned_B_tilde = prune(out.B_tilde, hp.threshold_eps);
  return out;
}

}  // namespace lina
