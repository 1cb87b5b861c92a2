#pragma once

#include "lina/triad.hpp"

namespace lina {

enum class NoiseDist { Laplace, SubGaussian, SuperGaussian };

struct GenConfig {
  int q = 5;
  int indicators_per_factor = 2;
  long n = 1000;
  std::pair<double, double> weight_range{0.5, 2.0};
  std::pair<double, double> loading_range{0.2, 0.7};
  double noise_ratio = 0.1;
  NoiseDist noise_dist = NoiseDist::Laplace;
  double edge_density = -1.0;  // expected edge count; < 0 -> q
  long seed = 0;

  void validate() const;
  double expected_edges() const { return edge_density < 0 ? q : edge_density; }
};

struct GroundTruth {
  Matrix B_true;   // effects among unit-variance factors
  Matrix G_true;   // effective loadings, pure pattern
  ClusterSpec clusters;
  Matrix F;        // q x n latent samples
  Matrix X;        // p x n observed samples
};

// Random ER DAG hidden behind a uniform permutation; weights drawn from
// +-weight_range.
Matrix gen_dag(int q, double expected_edges,
               std::pair<double, double> weight_range, long seed);

// Standardized i.i.d. non-Gaussian draws. Sub/SuperGaussian use the
// sign-power transform of standard normals.
Vector gen_noise(NoiseDist dist, long n, long seed);

// F = (I - B)^{-1} E, rows rescaled to unit sample variance. Returns the
// rescaled factors and the correspondingly rescaled effects matrix.
std::pair<Matrix, Matrix> gen_latents(const Matrix& B_true, NoiseDist dist,
                                      long n, long seed);

struct ObservedData {
  Matrix X;
  Matrix G_true;
  ClusterSpec clusters;
};

ObservedData gen_observed(const Matrix& F, const GenConfig& cfg, long seed);

GroundTruth gen_single(const GenConfig& cfg);

struct MultiDomainTruth {
  MultiDomainDataset data;
  std::vector<GroundTruth> truths;
};

// shared_graph: one support pattern drawn once; weights, loadings and noise
// redrawn per domain.
MultiDomainTruth gen_multidomain(int M, const GenConfig& cfg, bool shared_graph,
                                 long seed);

}  // namespace lina
