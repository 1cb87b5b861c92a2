#pragma once

#include <functional>
#include <utility>

#include "lina/dataset.hpp"

namespace lina {

struct ObjectiveEvaluation {
  double value = 0.0;
  Vector gradient;
};

using Objective = std::function<ObjectiveEvaluation(const Vector&)>;
using MatrixObjective = std::function<ObjectiveEvaluation(const Matrix&)>;

struct PenaltyState {
  double rho = 1.0;
  double alpha = 0.0;      // ALM multiplier
  double h_value = 0.0;
  int outer_iter = 0;
  bool constraint_satisfied = true;
  bool line_search_ok = true;
};

inline constexpr double kEntryCap = 20.0;
inline constexpr double kSmoothAbsDelta = 1e-8;

// h(B) = tr(exp(B o B)) - q; zero exactly on DAG-supported matrices.
double acyclicity_h(const Matrix& B);

// (exp(B o B))^T o 2B.
Matrix acyclicity_grad(const Matrix& B);

// sqrt(u^2 + delta) and its derivative.
std::pair<double, double> smooth_abs(double u, double delta = kSmoothAbsDelta);

// Unit-variance Laplace log-density up to its additive constant,
// smoothed: -sqrt(2) * smooth_abs(u).
double laplace_logpdf(double u);

struct MinimizeResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  bool line_search_ok = true;
};

// Limited-memory quasi-Newton minimization with backtracking line search.
// Stops at gradient max-norm <= tol or after max_iter iterations.
MinimizeResult minimize_unconstrained(const Objective& objective,
                                      const Vector& x0, double tol = 1e-6,
                                      int max_iter = 500);

// QPM/ALM outer loop enforcing h(B) = 0 on top of a smooth score.
// `score` evaluates F(B) with gradient in the same q*q layout (diagonal
// entries are held at zero and excluded from the search).
std::pair<Matrix, PenaltyState> penalty_loop(const MatrixObjective& score,
                                             const Hyperparams& hp,
                                             const Matrix& B0);

// True iff the support of B admits a topological order.
bool topological_sort(const Matrix& B, std::vector<int>* order = nullptr);

// Flattening of a square matrix to its off-diagonal entries (column-major);
// the diagonal is a structural zero throughout the structure search.
Vector pack_offdiag(const Matrix& B);
Matrix unpack_offdiag(const Vector& v, Eigen::Index q);

}  // namespace lina
