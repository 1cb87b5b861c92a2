#pragma once

#include <vector>

#include "lina/dataset.hpp"

namespace lina {

// Pure-measurement clusters: clusters[f] lists the observed-variable indices
// loading on latent factor f. Every cluster must have at least two members.
struct ClusterSpec {
  std::vector<std::vector<int>> clusters;

  int q() const { return static_cast<int>(clusters.size()); }
  void validate(Eigen::Index p) const;
};

struct IndependenceTestConfig {
  double alpha = 0.01;
  double fixed_bandwidth = 0.0;  // 0 -> median heuristic
  int max_test_samples = 1000;
};

enum class Direction { C1ToC2, C2ToC1, Undecided };

// E = x_i - (cov(x_i,x_k)/cov(x_j,x_k)) * x_j, with sample covariances.
Vector pseudo_residual(const Vector& xi, const Vector& xj, const Vector& xk);

// HSIC with Gaussian kernels, median-heuristic bandwidth and a gamma
// approximation of the null. Deterministic; subsamples evenly above
// cfg.max_test_samples.
double independence_test(const Vector& u, const Vector& v,
                         const IndependenceTestConfig& cfg);

// True iff the pseudo-residual of {x_i, x_j} relative to x_k is dependent
// on x_k at level cfg.alpha.
bool triad_violated(int i, int j, int k, const DomainDataset& data,
                    const IndependenceTestConfig& cfg);

// Greedy discovery of pure measurement pairs and their transitive closure.
ClusterSpec locate_clusters(const DomainDataset& data,
                            const IndependenceTestConfig& cfg);

// Latent direction between two located clusters from the violated/satisfied
// asymmetry of the triad test.
Direction pairwise_direction(const std::vector<int>& c1,
                             const std::vector<int>& c2,
                             const DomainDataset& data,
                             const IndependenceTestConfig& cfg);

}  // namespace lina
