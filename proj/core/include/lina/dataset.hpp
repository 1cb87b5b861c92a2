#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "lina/errors.hpp"

namespace lina {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class PenaltyMode { QPM, ALM };

// Solver and regularization settings shared across the pipeline.
struct Hyperparams {
  double lambda1 = 0.1;       // adaptive-L1 weight on B
  double lambda2 = 0.1;       // L2 weight on B
  double lambda3 = 0.1;       // adaptive-L1 weight on H
  double threshold_eps = 0.3; // effect threshold for pruning
  double rho_init = 1.0;
  double rho_mult = 10.0;
  double rho_max = 1e16;
  double h_tol = 1e-8;
  double solver_tol = 1e-6;
  int max_outer = 30;
  int max_alt = 50;
  long seed = 0;
  PenaltyMode penalty_mode = PenaltyMode::QPM;

  void validate() const;
};

// One domain's observations: rows are variables, columns are samples.
struct DomainDataset {
  Matrix data;
  std::vector<std::string> variable_names;
  int domain_id = 1;

  Eigen::Index p() const { return data.rows(); }
  Eigen::Index n() const { return data.cols(); }
};

struct MultiDomainDataset {
  std::vector<DomainDataset> domains;

  Eigen::Index total_p() const;
  Eigen::Index total_n() const;
  int num_domains() const { return static_cast<int>(domains.size()); }
};

// Block-diagonal embedding of a MultiDomainDataset into one matrix.
// row_domain/col_domain record each row/column's domain of origin (1-based),
// row_within/col_within the index inside that domain.
struct AugmentedDataset {
  Matrix data;
  std::vector<int> row_domain, row_within;
  std::vector<int> col_domain, col_within;
};

// Removes row means and rescales rows to unit sample variance (n-1 divisor).
DomainDataset standardize(const DomainDataset& d);

void standardize_in_place(Matrix& data);

// Block-diagonal coding of M domains into one augmented dataset.
AugmentedDataset augment(const MultiDomainDataset& md);

// Inverse of augment for one block; exact by construction.
DomainDataset extract_domain(const AugmentedDataset& aug,
                             const MultiDomainDataset& md, int domain_id);

}  // namespace lina
