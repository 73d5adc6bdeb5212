#pragma once
/// @file errors.hpp
/// Exception types shared by the library.

#include <stdexcept>
#include <string>

namespace hpv {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad parameter value (negative time, exponent out of range, ...).
struct InvalidArgument : Error {
  using Error::Error;
};

/// Kernel evaluated too close to its singular point.
struct SingularityError : Error {
  using Error::Error;
};

/// A point lies outside the truncated computational domain.
struct DomainError : Error {
  using Error::Error;
};

/// Too few samples for a spectral transform.
struct ResolutionError : Error {
  using Error::Error;
};

/// Inconsistent run configuration (mesh, stability limit, schema).
struct ConfigError : Error {
  using Error::Error;
};

/// Field contains NaN or Inf.
struct CorruptField : Error {
  using Error::Error;
};

}  // namespace hpv
