#pragma once

#include "lina/structure.hpp"

namespace lina {

struct SkeletonMetrics {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  int tp = 0, fp = 0, fn = 0;
};

// Undirected skeleton comparison on supports thresholded at eps.
// Conventions: precision = 0 when tp+fp = 0; recall = 1 when the true
// skeleton is empty.
SkeletonMetrics skeleton_metrics(const Matrix& B_est, const Matrix& B_true,
                                 double eps);

// Directed-edge variant of the same counts.
SkeletonMetrics directed_metrics(const Matrix& B_est, const Matrix& B_true,
                                 double eps);

struct MatchResult {
  std::vector<int> permutation;  // est column j corresponds to true column permutation[j]
  std::vector<double> signs;
  double mean_abs_error = 0.0;
  Matrix B_aligned;
};

// Mods out the column permutation/sign indeterminacy of the loadings before
// comparing effects; exact enumeration for q <= 10.
MatchResult matched_effect_error(const Matrix& B_est, const Matrix& G_est,
                                 const Matrix& B_true, const Matrix& G_true);

// Variance inflation factors 1/(1 - R^2) per variable.
Vector vif(const Matrix& X);

struct CvCell {
  double lambda1 = 0.0;
  double eps = 0.0;
  double mean_validation_negloglik = 0.0;
  bool failed = false;
};

struct CvReport {
  std::vector<CvCell> grid;
  int best_cell = -1;
  int folds = 0;
};

CvReport cross_validate(const Matrix& data, const ClusterSpec& clusters,
                        const std::vector<std::pair<double, double>>& grid,
                        int k, const Hyperparams& hp);

}  // namespace lina
