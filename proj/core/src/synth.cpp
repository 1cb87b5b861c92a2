#include "lina/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace lina {

void GenConfig::validate() const {
  if (q < 1) throw Error("q must be positive");
  if (indicators_per_factor < 2)
    throw Error("each factor needs at least 2 pure indicators");
  if (n < 3) throw Error("need at least 3 samples");
  if (weight_range.first <= 0 || weight_range.second < weight_range.first)
    throw Error("weight range must be positive and ordered");
  if (loading_range.first <= 0 || loading_range.second < loading_range.first)
    throw Error("loading range must be positive and ordered");
  if (noise_ratio < 0 || noise_ratio >= 1) throw Error("noise ratio must lie in [0, 1)");
}

namespace {

// Splittable sub-seed derivation so parallel trials stay independent.
uint64_t split_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double signed_uniform(std::mt19937_64& rng, std::pair<double, double> range) {
  std::uniform_real_distribution<double> mag(range.first, range.second);
  std::uniform_int_distribution<int> sign(0, 1);
  const double m = mag(rng);
  return sign(rng) ? m : -m;
}

void sample_standardize(Vector& v) {
  v.array() -= v.mean();
  const double sd = std::sqrt(v.squaredNorm() / static_cast<double>(v.size() - 1));
  if (sd > 0) v /= sd;
}

Matrix dag_with_support(int q, double expected_edges,
                        std::pair<double, double> weight_range,
                        std::mt19937_64& rng, const Matrix* support) {
  Matrix B = Matrix::Zero(q, q);
  if (q < 2) return B;

  if (support) {
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        if ((*support)(i, j) != 0.0) B(i, j) = signed_uniform(rng, weight_range);
    return B;
  }

  const double possible = q * (q - 1) / 2.0;
  const double p_edge = std::min(1.0, expected_edges / possible);
  std::vector<int> order(q);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  // order[a] precedes order[b] for a < b; edge order[a] -> order[b].
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b)
      if (unif(rng) < p_edge)
        B(order[b], order[a]) = signed_uniform(rng, weight_range);
  return B;
}

}  // namespace

Matrix gen_dag(int q, double expected_edges, std::pair<double, double> weight_range,
               long seed) {
  if (q < 1) throw Error("q must be positive");
  std::mt19937_64 rng(static_cast<uint64_t>(seed));
  return dag_with_support(q, expected_edges, weight_range, rng, nullptr);
}

Vector gen_noise(NoiseDist dist, long n, long seed) {
  if (n < 1) throw Error("need at least one sample");
  std::mt19937_64 rng(static_cast<uint64_t>(seed));
  Vector v(n);
  if (dist == NoiseDist::Laplace) {
    // Inverse-CDF draws at the unit-variance scale 1/sqrt(2).
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    const double b = 1.0 / std::sqrt(2.0);
    for (long t = 0; t < n; ++t) {
      const double u = unif(rng);
      v[t] = -b * (u < 0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::abs(u));
    }
    return v;
  }
  // Sign-power transform of standard normals, then standardization.
  std::uniform_real_distribution<double> expo(
      dist == NoiseDist::SubGaussian ? 0.5 : 1.2,
      dist == NoiseDist::SubGaussian ? 0.8 : 2.0);
  const double e = expo(rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (long t = 0; t < n; ++t) {
    const double z = normal(rng);
    v[t] = (z < 0 ? -1.0 : 1.0) * std::pow(std::abs(z), e);
  }
  sample_standardize(v);
  return v;
}

std::pair<Matrix, Matrix> gen_latents(const Matrix& B_true, NoiseDist dist, long n,
                                      long seed) {
  const Eigen::Index q = B_true.rows();
  Matrix E(q, n);
  for (Eigen::Index i = 0; i < q; ++i)
    E.row(i) = gen_noise(dist, n, static_cast<long>(split_seed(seed, i))).transpose();

  const Matrix F_raw =
      (Matrix::Identity(q, q) - B_true).lu().solve(E);

  Vector sd(q);
  Matrix F = F_raw;
  for (Eigen::Index i = 0; i < q; ++i) {
    const Vector row = F_raw.row(i).transpose();
    const double mean = row.mean();
    sd[i] = std::sqrt((row.array() - mean).matrix().squaredNorm() /
                      static_cast<double>(n - 1));
    F.row(i) /= sd[i];
  }
  // Effects among the rescaled (unit-variance) factors.
  Matrix B_rescaled = B_true;
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j)
      if (i != j) B_rescaled(i, j) = B_true(i, j) * sd[j] / sd[i];
  return {F, B_rescaled};
}

ObservedData gen_observed(const Matrix& F, const GenConfig& cfg, long seed) {
  const Eigen::Index q = F.rows();
  const Eigen::Index n = F.cols();
  const Eigen::Index p = q * cfg.indicators_per_factor;
  std::mt19937_64 rng(static_cast<uint64_t>(seed));
  std::normal_distribution<double> normal(0.0, 1.0);

  ObservedData out;
  out.X.resize(p, n);
  out.G_true = Matrix::Zero(p, q);
  out.clusters.clusters.assign(q, {});

  const double r = cfg.noise_ratio;
  Eigen::Index v = 0;
  for (Eigen::Index f = 0; f < q; ++f) {
    for (int k = 0; k < cfg.indicators_per_factor; ++k, ++v) {
      out.clusters.clusters[f].push_back(static_cast<int>(v));
      const double g = signed_uniform(rng, cfg.loading_range);
      out.G_true(v, f) = g;

      // Unit-variance signal share sqrt(1-r), error share sqrt(r), so that
      // Var(x) stays at one when measurement error is added.
      Vector signal = (g * F.row(f)).transpose();
      sample_standardize(signal);
      Vector err(n);
      for (Eigen::Index t = 0; t < n; ++t) err[t] = normal(rng);
      if (r > 0) sample_standardize(err);
      out.X.row(v) =
          (std::sqrt(1.0 - r) * signal + std::sqrt(r) * err).transpose();
    }
  }
  return out;
}

namespace {

GroundTruth domain_truth(const GenConfig& cfg, long seed, const Matrix* support) {
  std::mt19937_64 rng(split_seed(seed, 1));
  const Matrix B0 = dag_with_support(cfg.q, cfg.expected_edges(), cfg.weight_range,
                                     rng, support);
  GroundTruth gt;
  auto [F, B_rescaled] =
      gen_latents(B0, cfg.noise_dist, cfg.n, static_cast<long>(split_seed(seed, 2)));
  gt.F = F;
  gt.B_true = B_rescaled;
  ObservedData obs = gen_observed(F, cfg, static_cast<long>(split_seed(seed, 3)));
  gt.X = std::move(obs.X);
  gt.G_true = std::move(obs.G_true);
  gt.clusters = std::move(obs.clusters);
  return gt;
}

}  // namespace

GroundTruth gen_single(const GenConfig& cfg) {
  cfg.validate();
  return domain_truth(cfg, cfg.seed, nullptr);
}

MultiDomainTruth gen_multidomain(int M, const GenConfig& cfg, bool shared_graph,
                                 long seed) {
  cfg.validate();
  if (M < 1) throw Error("need at least one domain");

  MultiDomainTruth out;
  Matrix support;
  for (int m = 0; m < M; ++m) {
    const long dseed =
        m == 0 ? seed : static_cast<long>(split_seed(seed, 100 + m));
    GenConfig dcfg = cfg;
    dcfg.seed = dseed;
    GroundTruth gt =
        domain_truth(dcfg, dseed, (shared_graph && m > 0) ? &support : nullptr);
    if (m == 0) support = gt.B_true;

    DomainDataset d;
    d.domain_id = m + 1;
    d.data = gt.X;
    for (Eigen::Index i = 0; i < gt.X.rows(); ++i)
      d.variable_names.push_back("d" + std::to_string(m + 1) + "_x" +
                                 std::to_string(i + 1));
    out.data.domains.push_back(std::move(d));
    out.truths.push_back(std::move(gt));
  }
  return out;
}

}  // namespace lina
