#pragma once

#include <stdexcept>
#include <string>

namespace qmcf {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Inconsistent or invalid configuration (coefficients, grids, table specs).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Geometry query at a point where the normal is undefined (the sphere center).
struct DegenerateInputError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Non-finite values produced by time stepping.
struct StabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The interface or the nematic region has vanished.
struct ExtinctionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qmcf
