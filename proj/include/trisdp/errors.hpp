#pragma once

#include <stdexcept>
#include <string>

namespace trisdp {

/// Operand shapes do not agree (vector length, matrix order, equation count).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix that must be positive semidefinite has a significantly negative
/// eigenvalue.
class NotPsdError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input is well-shaped but the requested operation is undefined for it
/// (zero trace, zero direction, coincident points, b = 0, ...).
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input data violates a structural invariant (duplicate coordinates,
/// non-finite values, malformed files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trisdp
