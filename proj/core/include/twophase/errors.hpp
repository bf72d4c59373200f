#pragma once

#include <stdexcept>
#include <string>

namespace twophase {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid argument or degenerate geometry (nonpositive radius, a >= b, ...).
struct DomainError : Error {
  using Error::Error;
};

/// A structural invariant of a loaded object is violated.
struct ValidationError : Error {
  using Error::Error;
};

/// Malformed input file.
struct ParseError : Error {
  using Error::Error;
};

/// Query point outside the closed computational domain.
struct OutOfDomainError : Error {
  using Error::Error;
};

/// Exponent argument exceeded the law's cap; the step must be rejected.
struct OverflowError : Error {
  using Error::Error;
};

/// Field length does not match the mesh.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// Empty or degenerate input where geometry is required.
struct DegenerateInput : Error {
  using Error::Error;
};

/// Backtracking found no admissible step above the machine floor.
struct LineSearchFailure : Error {
  using Error::Error;
};

/// The starting iterate has non-finite energy.
struct NonFiniteEnergy : Error {
  using Error::Error;
};

}  // namespace twophase
