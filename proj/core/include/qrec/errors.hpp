#pragma once

#include <stdexcept>
#include <string>

namespace qrec {

// precondition / parameter violations
struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& m) : std::invalid_argument(m) {}
};

// matrix shape / dimension mismatches
struct ShapeError : std::invalid_argument {
  explicit ShapeError(const std::string& m) : std::invalid_argument(m) {}
};

// density-matrix invariant violations (negative spectrum, trace, hermiticity)
struct StateError : std::runtime_error {
  explicit StateError(const std::string& m) : std::runtime_error(m) {}
};

// operator fails unitarity / completeness checks
struct OperatorError : std::runtime_error {
  explicit OperatorError(const std::string& m) : std::runtime_error(m) {}
};

// measurement branch with vanishing probability
struct DegenerateBranchError : std::runtime_error {
  explicit DegenerateBranchError(const std::string& m) : std::runtime_error(m) {}
};

// entropy / erasure targets beyond the bath's entropy ceiling
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& m) : std::runtime_error(m) {}
};

// threshold searches that find no sign change in the bracket
struct ThresholdError : std::runtime_error {
  explicit ThresholdError(const std::string& m) : std::runtime_error(m) {}
};

// regression inputs too small to fit
struct InsufficientDataError : std::runtime_error {
  explicit InsufficientDataError(const std::string& m) : std::runtime_error(m) {}
};

} // namespace qrec
