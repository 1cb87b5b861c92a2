#include "lina/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace lina {

namespace {

SkeletonMetrics finish_metrics(int tp, int fp, int fn) {
  SkeletonMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 1.0;
  const double denom = m.recall + m.precision;
  m.f1 = denom > 0 ? 2.0 * m.recall * m.precision / denom : 0.0;
  return m;
}

}  // namespace

SkeletonMetrics skeleton_metrics(const Matrix& B_est, const Matrix& B_true,
                                 double eps) {
  if (B_est.rows() != B_true.rows() || B_est.cols() != B_true.cols())
    throw DimensionMismatch("skeleton_metrics: shape mismatch");
  const Eigen::Index q = B_est.rows();
  int tp = 0, fp = 0, fn = 0;
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = i + 1; j < q; ++j) {
      const bool est = std::abs(B_est(i, j)) >= eps || std::abs(B_est(j, i)) >= eps;
      const bool truth =
          std::abs(B_true(i, j)) >= eps || std::abs(B_true(j, i)) >= eps;
      tp += est && truth;
      fp += est && !truth;
      fn += !est && truth;
    }
  return finish_metrics(tp, fp, fn);
}

SkeletonMetrics directed_metrics(const Matrix& B_est, const Matrix& B_true,
                                 double eps) {
  if (B_est.rows() != B_true.rows() || B_est.cols() != B_true.cols())
    throw DimensionMismatch("directed_metrics: shape mismatch");
  const Eigen::Index q = B_est.rows();
  int tp = 0, fp = 0, fn = 0;
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j) {
      if (i == j) continue;
      const bool est = std::abs(B_est(i, j)) >= eps;
      const bool truth = std::abs(B_true(i, j)) >= eps;
      tp += est && truth;
      fp += est && !truth;
      fn += !est && truth;
    }
  return finish_metrics(tp, fp, fn);
}

namespace {

double column_corr(const Vector& a, const Vector& b) {
  const Vector ac = a.array() - a.mean();
  const Vector bc = b.array() - b.mean();
  const double den = ac.norm() * bc.norm();
  return den > 0 ? ac.dot(bc) / den : 0.0;
}

}  // namespace

MatchResult matched_effect_error(const Matrix& B_est, const Matrix& G_est,
                                 const Matrix& B_true, const Matrix& G_true) {
  const Eigen::Index q = B_est.rows();
  if (B_true.rows() != q || G_est.cols() != q || G_true.cols() != q)
    throw DimensionMismatch("matched_effect_error: factor counts differ");
  if (G_est.rows() != G_true.rows())
    throw DimensionMismatch("matched_effect_error: variable counts differ");
  if (q > 10) throw Error("matched_effect_error supports q <= 10");

  Matrix corr(q, q);
  for (Eigen::Index a = 0; a < q; ++a)
    for (Eigen::Index b = 0; b < q; ++b)
      corr(a, b) = column_corr(G_est.col(a), G_true.col(b));

  // Exact assignment by enumeration: est column a plays true column perm[a].
  std::vector<int> perm(q);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  double best_score = -1.0;
  do {
    double score = 0.0;
    for (Eigen::Index a = 0; a < q; ++a) score += std::abs(corr(a, perm[a]));
    if (score > best_score) {
      best_score = score;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  MatchResult res;
  res.permutation = best_perm;
  res.signs.resize(q);
  for (Eigen::Index a = 0; a < q; ++a)
    res.signs[a] = corr(a, best_perm[a]) >= 0 ? 1.0 : -1.0;

  res.B_aligned = Matrix::Zero(q, q);
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j)
      res.B_aligned(best_perm[i], best_perm[j]) =
          res.signs[i] * res.signs[j] * B_est(i, j);

  double err = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j) {
      if (i == j) continue;
      if (res.B_aligned(i, j) != 0.0 || B_true(i, j) != 0.0) {
        err += std::abs(res.B_aligned(i, j) - B_true(i, j));
        ++count;
      }
    }
  res.mean_abs_error = count > 0 ? err / count : 0.0;
  return res;
}

Vector vif(const Matrix& X) {
  const Eigen::Index p = X.rows();
  const Eigen::Index n = X.cols();
  if (n <= p) throw Error("vif needs more samples than variables");

  Matrix centered = X;
  centered.colwise() -= X.rowwise().mean();
  Vector out(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double tss = centered.row(i).squaredNorm();
    if (tss <= 1e-12) throw ZeroVarianceVariable(static_cast<int>(i));
    Matrix others(p - 1, n);
    Eigen::Index r = 0;
    for (Eigen::Index j = 0; j < p; ++j)
      if (j != i) others.row(r++) = centered.row(j);

    // Least-squares regression of variable i on the rest.
    const Matrix A = others.transpose();
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
    if (cod.rank() < std::min<Eigen::Index>(p - 1, n)) throw SingularDesign();
    const Vector beta = cod.solve(centered.row(i).transpose());
    const double rss = (centered.row(i).transpose() - A * beta).squaredNorm();
    const double r2 = 1.0 - rss / tss;
    if (r2 >= 1.0 - 1e-12) throw SingularDesign();
    out[i] = 1.0 / (1.0 - r2);
  }
  return out;
}

CvReport cross_validate(const Matrix& data, const ClusterSpec& clusters,
                        const std::vector<std::pair<double, double>>& grid,
                        int k, const Hyperparams& hp) {
  const Eigen::Index n = data.cols();
  if (k < 2) throw Error("cross-validation needs k >= 2");
  if (n < k) throw Error("cross-validation needs n >= k");

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(static_cast<uint64_t>(hp.seed));
  std::shuffle(order.begin(), order.end(), rng);

  // Contiguous folds over the shuffled order.
  std::vector<std::vector<Eigen::Index>> folds(k);
  for (Eigen::Index t = 0; t < n; ++t)
    folds[static_cast<int>(t * k / n)].push_back(order[t]);

  CvReport report;
  report.folds = k;
  for (auto [lambda1, eps] : grid) {
    CvCell cell;
    cell.lambda1 = lambda1;
    cell.eps = eps;
    double total = 0.0;
    int ok_folds = 0;
    for (int f = 0; f < k; ++f) {
      try {
        const Eigen::Index n_val = static_cast<Eigen::Index>(folds[f].size());
        Matrix train(data.rows(), n - n_val), val(data.rows(), n_val);
        Eigen::Index tcol = 0;
        for (int g = 0; g < k; ++g) {
          if (g == f) continue;
          for (Eigen::Index c : folds[g]) train.col(tcol++) = data.col(c);
        }
        for (Eigen::Index v = 0; v < n_val; ++v) val.col(v) = data.col(folds[f][v]);

        standardize_in_place(train);
        standardize_in_place(val);

        Hyperparams cell_hp = hp;
        cell_hp.lambda1 = lambda1;
        cell_hp.threshold_eps = eps;
        const MeasurementModel model = fit_cfa(train, clusters);
        const StructureModel fit = fit_structure(model, train, cell_hp);
        total += neg_log_likelihood(fit.pruned_B, model, val).value /
                 static_cast<double>(n_val);
        ++ok_folds;
      } catch (const Error&) {
        cell.failed = true;
        break;
      }
    }
    if (!cell.failed && ok_folds == k)
      cell.mean_validation_negloglik = total / k;
    else
      cell.failed = true;
    report.grid.push_back(cell);
  }

  // Argmin; exact ties go to the smaller lambda1, then the smaller eps.
  for (size_t c = 0; c < report.grid.size(); ++c) {
    const CvCell& cand = report.grid[c];
    if (cand.failed) continue;
    if (report.best_cell < 0) {
      report.best_cell = static_cast<int>(c);
      continue;
    }
    const CvCell& best = report.grid[report.best_cell];
    const auto key = [](const CvCell& x) {
      return std::make_tuple(x.mean_validation_negloglik, x.lambda1, x.eps);
    };
    if (key(cand) < key(best)) report.best_cell = static_cast<int>(c);
  }
  return report;
}

}  // namespace lina
