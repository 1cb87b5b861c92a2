#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lina/synth.hpp>

#include <cmath>

#include "helpers.hpp"

using namespace lina;

namespace {

double excess_kurtosis(const Vector& v) {
  const double m = v.mean();
  const double n = static_cast<double>(v.size());
  const double var = (v.array() - m).square().sum() / n;
  const double m4 = (v.array() - m).pow(4).sum() / n;
  return m4 / (var * var) - 3.0;
}

}  // namespace

TEST_CASE("gen_dag basics") {
  CHECK(gen_dag(1, 1.0, {0.5, 2.0}, 3).cwiseAbs().maxCoeff() == 0.0);

  for (long seed = 0; seed < 20; ++seed) {
    const Matrix B = gen_dag(5, 5.0, {0.5, 2.0}, seed);
    CHECK(std::abs(acyclicity_h(B)) < 1e-9);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (B(i, j) != 0.0) {
          CHECK(std::abs(B(i, j)) >= 0.5);
          CHECK(std::abs(B(i, j)) <= 2.0);
        }
  }
}

TEST_CASE("gen_noise moments") {
  const Vector lap = gen_noise(NoiseDist::Laplace, 100000, 5);
  CHECK(std::abs(lap.mean()) < 1e-2);
  const double var = (lap.array() - lap.mean()).square().sum() / lap.size();
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
  const double k = excess_kurtosis(lap);
  CHECK(k > 2.5);
  CHECK(k < 3.5);

  const Vector sub = gen_noise(NoiseDist::SubGaussian, 100000, 6);
  CHECK(excess_kurtosis(sub) < 0.0);

  const Vector sup = gen_noise(NoiseDist::SuperGaussian, 100000, 7);
  CHECK(excess_kurtosis(sup) > 0.5);
}

TEST_CASE("gen_latents follows the linear SEM") {
  Matrix B = Matrix::Zero(2, 2);
  B(1, 0) = 2.0;
  const auto [F, Br] = gen_latents(B, NoiseDist::Laplace, 100000, 8);
  // Unit-variance rows by contract.
  for (int i = 0; i < 2; ++i) {
    const double v =
        (F.row(i).array() - F.row(i).mean()).square().sum() / (F.cols() - 1);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
  }
  // corr(f1, f2) = 2/sqrt(5) for a single edge of weight 2.
  const double corr =
      (F.row(0).array() - F.row(0).mean())
          .cwiseProduct(F.row(1).array() - F.row(1).mean())
          .sum() /
      (F.cols() - 1);
  CHECK(corr == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(0.02));

  // B = 0: factors are just standardized noise.
  const auto [F0, B0r] = gen_latents(Matrix::Zero(2, 2), NoiseDist::Laplace,
                                     1000, 9);
  CHECK(B0r.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gen_observed respects the noise ratio") {
  GenConfig cfg;
  cfg.q = 2;
  cfg.n = 100000;
  cfg.seed = 10;
  const auto [F, Br] = gen_latents(gen_dag(2, 1.0, cfg.weight_range, 10),
                                   NoiseDist::Laplace, cfg.n, 10);
  const ObservedData obs = gen_observed(F, cfg, 11);
  for (Eigen::Index i = 0; i < obs.X.rows(); ++i) {
    const double v = (obs.X.row(i).array() - obs.X.row(i).mean()).square().sum() /
                     (cfg.n - 1);
    CHECK(v == doctest::Approx(1.0).epsilon(0.02));
  }
  for (const auto& c : obs.clusters.clusters)
    CHECK(c.size() == static_cast<size_t>(cfg.indicators_per_factor));
  // Pure pattern with loadings inside the configured range.
  for (Eigen::Index i = 0; i < obs.G_true.rows(); ++i) {
    int nonzeros = 0;
    for (Eigen::Index f = 0; f < obs.G_true.cols(); ++f)
      if (obs.G_true(i, f) != 0.0) ++nonzeros;
    CHECK(nonzeros == 1);
  }

  // r = 0: observations are exact rescalings of the factor combinations.
  GenConfig noiseless = cfg;
  noiseless.n = 200;
  noiseless.noise_ratio = 0.0;
  const auto [F2, B2] = gen_latents(gen_dag(2, 1.0, cfg.weight_range, 12),
                                    NoiseDist::Laplace, 200, 12);
  const ObservedData clean = gen_observed(F2, noiseless, 13);
  for (Eigen::Index i = 0; i < clean.X.rows(); ++i) {
    Eigen::Index f = 0;
    while (clean.G_true(i, f) == 0.0) ++f;
    // The signal is centered and rescaled, so compare after centering both.
    Vector x = clean.X.row(i).transpose();
    Vector s = F2.row(f).transpose();
    x.array() -= x.mean();
    s.array() -= s.mean();
    s *= clean.G_true(i, f) > 0 ? 1.0 : -1.0;
    const double scale = x.norm() / s.norm();
    CHECK((x - scale * s).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("noise-ratio contract on the error share") {
  GenConfig cfg;
  cfg.q = 2;
  cfg.n = 100000;
  cfg.noise_ratio = 0.1;
  cfg.seed = 21;
  const GroundTruth gt = gen_single(cfg);
  // Residual variance after projecting out the factor signal approximates r.
  for (Eigen::Index i = 0; i < gt.X.rows(); ++i) {
    Eigen::Index f = 0;
    while (gt.G_true(i, f) == 0.0) ++f;
    const Vector x = gt.X.row(i).transpose();
    const Vector s = gt.F.row(f).transpose();
    const double beta = x.dot(s) / s.dot(s);
    const Vector resid = x - beta * s;
    const double share = resid.squaredNorm() / x.squaredNorm();
    CHECK(share == doctest::Approx(0.1).epsilon(0.1));
  }
}

TEST_CASE("gen_single is reproducible and acyclic") {
  GenConfig cfg;
  cfg.seed = 33;
  const GroundTruth a = gen_single(cfg);
  const GroundTruth b = gen_single(cfg);
  CHECK((a.X - b.X).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.B_true - b.B_true).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(acyclicity_h(a.B_true)) < 1e-9);
  for (int i = 0; i < a.F.rows(); ++i) {
    const double v =
        (a.F.row(i).array() - a.F.row(i).mean()).square().sum() /
        (a.F.cols() - 1);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("gen_multidomain shares supports but redraws weights") {
  GenConfig cfg;
  cfg.q = 3;
  cfg.n = 400;
  cfg.seed = 44;
  const MultiDomainTruth mdt = gen_multidomain(2, cfg, true, 44);
  REQUIRE(mdt.truths.size() == 2);
  const Matrix& B1 = mdt.truths[0].B_true;
  const Matrix& B2 = mdt.truths[1].B_true;
  bool weights_differ = false;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK((B1(i, j) != 0.0) == (B2(i, j) != 0.0));
      if (B1(i, j) != B2(i, j)) weights_differ = true;
    }
  CHECK(weights_differ);
  CHECK(mdt.data.domains.size() == 2);
}
