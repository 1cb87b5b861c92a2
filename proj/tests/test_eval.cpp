#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lina/eval.hpp>
#include <lina/synth.hpp>

#include <cmath>

#include "helpers.hpp"

using namespace lina;

TEST_CASE("skeleton_metrics on perfect and disjoint estimates") {
  Matrix B = Matrix::Zero(3, 3);
  B(1, 0) = 0.8;
  B(2, 1) = -0.5;
  const SkeletonMetrics perfect = skeleton_metrics(B, B, 0.1);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.f1 == 1.0);

  // true {1-2, 2-3}, estimated {1-2, 1-3}.
  Matrix est = Matrix::Zero(3, 3);
  est(1, 0) = 0.8;
  est(2, 0) = 0.4;
  const SkeletonMetrics half = skeleton_metrics(est, B, 0.1);
  CHECK(half.tp == 1);
  CHECK(half.fp == 1);
  CHECK(half.fn == 1);
  CHECK(half.recall == 0.5);
  CHECK(half.precision == 0.5);
  CHECK(half.f1 == 0.5);

  const SkeletonMetrics empty = skeleton_metrics(Matrix::Zero(3, 3), B, 0.1);
  CHECK(empty.recall == 0.0);
  CHECK(empty.precision == 0.0);
  CHECK(empty.f1 == 0.0);

  // Empty truth: recall convention 1.
  const SkeletonMetrics no_truth =
      skeleton_metrics(Matrix::Zero(3, 3), Matrix::Zero(3, 3), 0.1);
  CHECK(no_truth.recall == 1.0);
}

TEST_CASE("f1 identity holds on random instances") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Matrix est = testutil::random_matrix(4, 4, seed);
    const Matrix tru = testutil::random_matrix(4, 4, 100 + seed);
    const SkeletonMetrics m = skeleton_metrics(est, tru, 0.5);
    if (m.recall + m.precision > 0)
      CHECK(m.f1 == doctest::Approx(2 * m.recall * m.precision /
                                    (m.recall + m.precision)).epsilon(1e-12));
    else
      CHECK(m.f1 == 0.0);
  }
}

TEST_CASE("directed_metrics distinguishes edge orientation") {
  Matrix tru = Matrix::Zero(2, 2);
  tru(1, 0) = 1.0;
  Matrix est = Matrix::Zero(2, 2);
  est(0, 1) = 1.0;  // reversed
  CHECK(skeleton_metrics(est, tru, 0.1).f1 == 1.0);
  CHECK(directed_metrics(est, tru, 0.1).f1 == 0.0);
}

TEST_CASE("matched_effect_error undoes a permutation and sign flip") {
  Matrix G_true = Matrix::Zero(4, 2);
  G_true << 0.8, 0, 0.6, 0, 0, 0.9, 0, 0.5;
  Matrix B_true = Matrix::Zero(2, 2);
  B_true(1, 0) = 1.2;

  const MatchResult self = matched_effect_error(B_true, G_true, B_true, G_true);
  CHECK(self.mean_abs_error == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(self.permutation == std::vector<int>{0, 1});

  // Swap the two factors and flip the first (new) column's sign.
  Matrix G_est(4, 2);
  G_est.col(0) = -G_true.col(1);
  G_est.col(1) = G_true.col(0);
  Matrix B_est = Matrix::Zero(2, 2);
  // B under (swap, flip first): B'(i,j) = s_i s_j B(p(i), p(j))
  B_est(0, 1) = -1.2;
  const MatchResult undone = matched_effect_error(B_est, G_est, B_true, G_true);
  CHECK(undone.mean_abs_error == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("matched_effect_error ignores relabeling of the truth") {
  const Matrix G_est = testutil::random_matrix(6, 3, 51);
  Matrix B_est = testutil::random_matrix(3, 3, 52, 0.8);
  B_est.diagonal().setZero();
  Matrix G_true = G_est + 0.05 * testutil::random_matrix(6, 3, 53);
  Matrix B_true = B_est + 0.05 * testutil::random_matrix(3, 3, 54);
  B_true.diagonal().setZero();
  const double base =
      matched_effect_error(B_est, G_est, B_true, G_true).mean_abs_error;

  std::vector<int> perm = {1, 2, 0};
  Vector s(3);
  s << 1, -1, -1;
  Matrix Gp(6, 3), Bp(3, 3);
  for (int f = 0; f < 3; ++f) Gp.col(f) = s[f] * G_true.col(perm[f]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      Bp(i, j) = s[i] * s[j] * B_true(perm[i], perm[j]);
  const double relabeled =
      matched_effect_error(B_est, G_est, Bp, Gp).mean_abs_error;
  CHECK(relabeled == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("vif values") {
  // Orthogonalized sample: VIF exactly 1.
  Matrix X(2, 4);
  X << 1, 1, -1, -1, 1, -1, 1, -1;
  const Vector v = vif(X);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-8));

  // Exact correlation 0.9 between two variables.
  const long n = 2000;
  std::mt19937 rng(61);
  std::normal_distribution<double> g;
  Matrix Y(2, n);
  for (long t = 0; t < n; ++t) {
    Y(0, t) = g(rng);
    Y(1, t) = g(rng);
  }
  // Orthogonalize then mix to force the target sample correlation.
  Y.row(0).array() -= Y.row(0).mean();
  Y.row(1).array() -= Y.row(1).mean();
  Y.row(1) -= (Y.row(1).dot(Y.row(0)) / Y.row(0).squaredNorm()) * Y.row(0);
  Y.row(0) /= Y.row(0).norm();
  Y.row(1) /= Y.row(1).norm();
  Matrix Z(2, n);
  Z.row(0) = Y.row(0);
  Z.row(1) = 0.9 * Y.row(0) + std::sqrt(1 - 0.81) * Y.row(1);
  const Vector vz = vif(Z);
  CHECK(vz[0] == doctest::Approx(1.0 / (1.0 - 0.81)).epsilon(1e-6));
  CHECK(vz[1] == doctest::Approx(1.0 / (1.0 - 0.81)).epsilon(1e-6));

  // Duplicated variable: singular design.
  Matrix D(2, 50);
  D.row(0) = testutil::random_matrix(1, 50, 62);
  D.row(1) = D.row(0);
  CHECK_THROWS_AS(vif(D), SingularDesign);
}

TEST_CASE("vif is always at least one") {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const Matrix X = testutil::random_matrix(4, 100, 70 + seed);
    const Vector v = vif(X);
    for (int i = 0; i < 4; ++i) CHECK(v[i] >= 1.0 - 1e-10);
  }
}

TEST_CASE("cross_validate basics") {
  GenConfig cfg;
  cfg.q = 2;
  cfg.n = 300;
  cfg.seed = 99;
  const GroundTruth gt = gen_single(cfg);
  Hyperparams hp;

  const std::vector<std::pair<double, double>> one = {{0.1, 0.3}};
  const CvReport single = cross_validate(gt.X, gt.clusters, one, 3, hp);
  CHECK(single.best_cell == 0);
  CHECK(single.grid.size() == 1);

  const std::vector<std::pair<double, double>> grid = {
      {0.05, 0.1}, {0.1, 0.3}, {0.5, 0.3}};
  const CvReport a = cross_validate(gt.X, gt.clusters, grid, 3, hp);
  const CvReport b = cross_validate(gt.X, gt.clusters, grid, 3, hp);
  REQUIRE(a.grid.size() == 3);
  CHECK(a.best_cell == b.best_cell);
  for (size_t i = 0; i < 3; ++i)
    CHECK(a.grid[i].mean_validation_negloglik ==
          b.grid[i].mean_validation_negloglik);
  // The winner attains the minimum over clean cells.
  for (const auto& cell : a.grid)
    if (!cell.failed)
      CHECK(a.grid[a.best_cell].mean_validation_negloglik <=
            cell.mean_validation_negloglik + 1e-12);
}
