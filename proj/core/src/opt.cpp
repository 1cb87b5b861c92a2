#include "lina/opt.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <deque>
#include <limits>

namespace lina {

double acyclicity_h(const Matrix& B) {
  if (B.rows() != B.cols()) throw DimensionMismatch("acyclicity_h needs a square matrix");
  if (B.cwiseAbs().maxCoeff() > kEntryCap) throw OverflowRisk();
  const Matrix A = B.cwiseProduct(B);
  return Matrix(A.exp()).trace() - static_cast<double>(B.rows());
}

Matrix acyclicity_grad(const Matrix& B) {
  if (B.rows() != B.cols()) throw DimensionMismatch("acyclicity_grad needs a square matrix");
  if (B.cwiseAbs().maxCoeff() > kEntryCap) throw OverflowRisk();
  const Matrix A = B.cwiseProduct(B);
  const Matrix E = A.exp();
  return E.transpose().cwiseProduct(2.0 * B);
}

std::pair<double, double> smooth_abs(double u, double delta) {
  const double v = std::sqrt(u * u + delta);
  return {v, u / v};
}

double laplace_logpdf(double u) {
  return -std::sqrt(2.0) * smooth_abs(u).first;
}

namespace {

// Two-loop recursion over the stored (s, y) pairs.
Vector lbfgs_direction(const Vector& g, const std::deque<Vector>& ss,
                       const std::deque<Vector>& ys) {
  Vector q = g;
  const int m = static_cast<int>(ss.size());
  std::vector<double> alpha(m), rho(m);
  for (int i = m - 1; i >= 0; --i) {
    rho[i] = 1.0 / ys[i].dot(ss[i]);
    alpha[i] = rho[i] * ss[i].dot(q);
    q -= alpha[i] * ys[i];
  }
  if (m > 0) {
    const double gamma = ss.back().dot(ys.back()) / ys.back().squaredNorm();
    q *= gamma;
  }
  for (int i = 0; i < m; ++i) {
    const double beta = rho[i] * ys[i].dot(q);
    q += (alpha[i] - beta) * ss[i];
  }
  return -q;
}

}  // namespace

MinimizeResult minimize_unconstrained(const Objective& objective, const Vector& x0,
                                      double tol, int max_iter) {
  constexpr int kMemory = 10;
  constexpr double kArmijo = 1e-4;

  Vector x = x0;
  ObjectiveEvaluation cur = objective(x);
  if (!std::isfinite(cur.value)) throw Error("objective not finite at the start point");

  MinimizeResult result;
  result.x = x;
  result.value = cur.value;

  std::deque<Vector> ss, ys;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (cur.gradient.size() == 0 ||
        cur.gradient.lpNorm<Eigen::Infinity>() <= tol)
      break;

    Vector d = lbfgs_direction(cur.gradient, ss, ys);
    double dg = d.dot(cur.gradient);
    if (!(dg < 0)) {  // not a descent direction, reset to steepest descent
      ss.clear();
      ys.clear();
      d = -cur.gradient;
      dg = d.dot(cur.gradient);
    }

    // Backtracking line search with quadratic interpolation.
    double step = 1.0;
    ObjectiveEvaluation next;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      next = objective(x + step * d);
      if (std::isfinite(next.value) &&
          next.value <= cur.value + kArmijo * step * dg) {
        accepted = true;
        break;
      }
      double quad = step;
      if (std::isfinite(next.value)) {
        const double denom = 2.0 * (next.value - cur.value - step * dg);
        if (denom > 0) quad = -dg * step * step / denom;
      }
      step = std::min(0.5 * step, std::max(quad, 0.1 * step));
    }
    if (!accepted) {
      result.line_search_ok = false;
      break;
    }

    const Vector x_new = x + step * d;
    const Vector s = x_new - x;
    const Vector y = next.gradient - cur.gradient;
    if (s.dot(y) > 1e-10 * s.norm() * y.norm()) {
      ss.push_back(s);
      ys.push_back(y);
      if (static_cast<int>(ss.size()) > kMemory) {
        ss.pop_front();
        ys.pop_front();
      }
    }
    x = x_new;
    cur = next;
    ++result.iterations;
    if (cur.value < result.value) {
      result.value = cur.value;
      result.x = x;
    }
  }
  if (cur.value <= result.value) {
    result.value = cur.value;
    result.x = x;
  }
  return result;
}

// Off-diagonal packing: the diagonal of B is a structural zero.
Vector pack_offdiag(const Matrix& B) {
  const Eigen::Index q = B.rows();
  Vector v(q * q - q);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < q; ++j)
    for (Eigen::Index i = 0; i < q; ++i)
      if (i != j) v[k++] = B(i, j);
  return v;
}

Matrix unpack_offdiag(const Vector& v, Eigen::Index q) {
  Matrix B = Matrix::Zero(q, q);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < q; ++j)
    for (Eigen::Index i = 0; i < q; ++i)
      if (i != j) B(i, j) = v[k++];
  return B;
}

std::pair<Matrix, PenaltyState> penalty_loop(const MatrixObjective& score,
                                             const Hyperparams& hp,
                                             const Matrix& B0) {
  const Eigen::Index q = B0.rows();
  PenaltyState state;
  state.rho = hp.rho_init;
  state.alpha = 0.0;

  Matrix B = B0;
  B.diagonal().setZero();
  double h_prev = acyclicity_h(B);
  bool ls_ok = true;

  for (int outer = 0; outer < hp.max_outer; ++outer) {
    state.outer_iter = outer + 1;
    const double rho = state.rho;
    const double alpha = state.alpha;

    auto penalized = [&](const Vector& v) {
      const Matrix Bv = unpack_offdiag(v, q);
      if (Bv.cwiseAbs().maxCoeff() > kEntryCap) {
        // Let the line search backtrack instead of overflowing exp(B o B).
        ObjectiveEvaluation bad;
        bad.value = std::numeric_limits<double>::infinity();
        bad.gradient = Vector::Zero(v.size());
        return bad;
      }
      ObjectiveEvaluation ev = score(Bv);
      const double h = acyclicity_h(Bv);
      ev.value += 0.5 * rho * h * h;
      Matrix grad = Eigen::Map<const Matrix>(ev.gradient.data(), q, q);
      double mult = rho * h;
      if (hp.penalty_mode == PenaltyMode::ALM) {
        ev.value += alpha * h;
        mult += alpha;
      }
      grad += mult * acyclicity_grad(Bv);
      ObjectiveEvaluation out;
      out.value = ev.value;
      out.gradient = pack_offdiag(grad);
      return out;
    };

    MinimizeResult inner =
        minimize_unconstrained(penalized, pack_offdiag(B), hp.solver_tol, 500);
    ls_ok = ls_ok && inner.line_search_ok;
    B = unpack_offdiag(inner.x, q);

    const double h_cur = acyclicity_h(B);
    state.h_value = h_cur;
    if (hp.penalty_mode == PenaltyMode::ALM) state.alpha += state.rho * h_cur;
    if (h_cur < hp.h_tol) break;
    if (h_cur > 0.25 * h_prev) state.rho *= hp.rho_mult;
    h_prev = h_cur;
    if (state.rho > hp.rho_max) break;
  }

  state.h_value = acyclicity_h(B);
  state.constraint_satisfied = state.h_value < hp.h_tol;
  state.line_search_ok = ls_ok;
  return {B, state};
}

bool topological_sort(const Matrix& B, std::vector<int>* order) {
  const int q = static_cast<int>(B.rows());
  // Edge j -> i whenever B(i, j) != 0.
  std::vector<int> indegree(q, 0);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (i != j && B(i, j) != 0.0) ++indegree[i];

  std::vector<int> ready;
  for (int i = 0; i < q; ++i)
    if (indegree[i] == 0) ready.push_back(i);

  std::vector<int> out;
  while (!ready.empty()) {
    const int j = ready.back();
    ready.pop_back();
    out.push_back(j);
    for (int i = 0; i < q; ++i)
      if (i != j && B(i, j) != 0.0 && --indegree[i] == 0) ready.push_back(i);
  }
  if (static_cast<int>(out.size()) != q) return false;
  if (order) *order = out;
  return true;
}

}  // namespace lina
