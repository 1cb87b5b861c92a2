#include "lina/dataset.hpp"

#include <cmath>

namespace lina {

void Hyperparams::validate() const {
  if (lambda1 < 0 || lambda2 < 0 || lambda3 < 0)
    throw Error("regularization parameters must be nonnegative");
  if (threshold_eps < 0) throw Error("threshold must be nonnegative");
  if (rho_init <= 0 || rho_max <= 0) throw Error("penalty parameters must be positive");
  if (rho_mult <= 1) throw Error("rho_mult must exceed 1");
  if (h_tol <= 0 || solver_tol <= 0) throw Error("tolerances must be positive");
  if (max_outer < 1 || max_alt < 1) throw Error("iteration limits must be positive");
}

Eigen::Index MultiDomainDataset::total_p() const {
  Eigen::Index p = 0;
  for (const auto& d : domains) p += d.p();
  return p;
}

Eigen::Index MultiDomainDataset::total_n() const {
  Eigen::Index n = 0;
  for (const auto& d : domains) n += d.n();
  return n;
}

void standardize_in_place(Matrix& data) {
  const Eigen::Index n = data.cols();
  if (n < 2) throw Error("standardization needs at least 2 samples");
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const double mean = data.row(i).mean();
    data.row(i).array() -= mean;
    const double var = data.row(i).squaredNorm() / static_cast<double>(n - 1);
    if (var <= 1e-12) throw ZeroVarianceVariable(static_cast<int>(i));
    data.row(i) /= std::sqrt(var);
  }
}

DomainDataset standardize(const DomainDataset& d) {
  DomainDataset out = d;
  standardize_in_place(out.data);
  return out;
}

AugmentedDataset augment(const MultiDomainDataset& md) {
  AugmentedDataset aug;
  const Eigen::Index p = md.total_p();
  const Eigen::Index n = md.total_n();
  aug.data = Matrix::Zero(p, n);
  aug.row_domain.resize(p);
  aug.row_within.resize(p);
  aug.col_domain.resize(n);
  aug.col_within.resize(n);

  Eigen::Index row = 0, col = 0;
  for (const auto& d : md.domains) {
    if (d.n() == 0) throw EmptyDomain(d.domain_id);
    aug.data.block(row, col, d.p(), d.n()) = d.data;
    for (Eigen::Index i = 0; i < d.p(); ++i) {
      aug.row_domain[row + i] = d.domain_id;
      aug.row_within[row + i] = static_cast<int>(i);
    }
    for (Eigen::Index t = 0; t < d.n(); ++t) {
      aug.col_domain[col + t] = d.domain_id;
      aug.col_within[col + t] = static_cast<int>(t);
    }
    row += d.p();
    col += d.n();
  }
  return aug;
}

DomainDataset extract_domain(const AugmentedDataset& aug,
                             const MultiDomainDataset& md, int domain_id) {
  Eigen::Index row = 0, col = 0;
  for (const auto& d : md.domains) {
    if (d.domain_id == domain_id) {
      DomainDataset out;
      out.domain_id = domain_id;
      out.variable_names = d.variable_names;
      out.data = aug.data.block(row, col, d.p(), d.n());
      return out;
    }
    row += d.p();
    col += d.n();
  }
  throw Error("unknown domain id " + std::to_string(domain_id));
}

}  // namespace lina
