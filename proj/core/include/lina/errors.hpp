#pragma once

#include <stdexcept>
#include <string>

namespace lina {

// Base class for all library errors. Subclasses distinguish the failure
// modes that callers are expected to handle separately.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ZeroVarianceVariable : public Error {
 public:
  explicit ZeroVarianceVariable(int index)
      : Error("variable " + std::to_string(index) + " has (near-)zero variance"),
        index(index) {}
  int index;
};

class EmptyDomain : public Error {
 public:
  explicit EmptyDomain(int domain_id)
      : Error("domain " + std::to_string(domain_id) + " has no samples") {}
};

class DegenerateReference : public Error {
 public:
  DegenerateReference() : Error("reference variable is uncorrelated with x_j") {}
};

class UncorrelatedTriple : public Error {
 public:
  UncorrelatedTriple() : Error("triple is not pairwise correlated") {}
};

class InsufficientSamples : public Error {
 public:
  explicit InsufficientSamples(long n)
      : Error("independence test needs >= 50 samples, got " + std::to_string(n)) {}
};

class NoClustersFound : public Error {
 public:
  NoClustersFound() : Error("no pure-compatible variable pair found") {}
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& what) : Error(what) {}
};

class RankDeficientLoadings : public Error {
 public:
  RankDeficientLoadings() : Error("loading matrix is rank deficient") {}
};

class RankDeficientH : public Error {
 public:
  RankDeficientH() : Error("transformation matrix H is rank deficient") {}
};

class AssignmentInfeasible : public Error {
 public:
  explicit AssignmentInfeasible(int column)
      : Error("hardening H left interest factor " + std::to_string(column) +
              " with no assigned rows") {}
};

class SingularDesign : public Error {
 public:
  SingularDesign() : Error("design matrix is singular; VIF undefined") {}
};

class OverflowRisk : public Error {
 public:
  OverflowRisk() : Error("matrix entries too large for a stable matrix exponential") {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace lina
