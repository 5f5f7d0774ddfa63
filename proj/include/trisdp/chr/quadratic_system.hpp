#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trisdp/linalg/sym_matrix.hpp"

namespace trisdp::chr {

using linalg::DenseMatrix;
using linalg::Index;
using linalg::SymMatrix;
using linalg::Vector;

/// System of m quadratic equations in n variables,
///   q_k(x) = x^T A_k x + c_k^T x + d_k = b_k,  k = 1..m,
/// with the linear and constant parts optional.
struct QuadraticSystem {
  Index n = 0;
  std::vector<SymMatrix> quad;
  std::optional<std::vector<Vector>> lin;
  std::optional<Vector> constant;
  Vector rhs;

  Index m() const { return static_cast<Index>(quad.size()); }
  /// No linear or constant part, or only zeros there.
  bool homogeneous() const;
  /// Throws DimensionError / DataError when shapes or values are invalid.
  void validate() const;

  static QuadraticSystem homogeneous_system(std::vector<SymMatrix> quad, Vector rhs);
};

/// Q(x) = (q_1(x), ..., q_m(x)).
Vector eval_Q(const QuadraticSystem& sys, const Vector& x);

/// A(X) = (A_1 . X, ..., A_m . X); only defined for homogeneous systems.
Vector apply_A(const QuadraticSystem& sys, const SymMatrix& x);
Vector apply_A(const QuadraticSystem& sys, const DenseMatrix& x);

/// Homogeneous equivalent of an inhomogeneous system.
///
/// Constants move to the right-hand side. When any linear part is non-zero an
/// extra variable z is appended, c_k^T x becomes the bilinear z c_k^T x stored
/// as a border row/column c_k / 2, and the equation z^2 = 1 is appended.
struct Homogenization {
  QuadraticSystem system;
  Index original_n = 0;
  Index original_m = 0;
  bool added_z = false;
  std::string warning;

  /// Maps a solution (x, z) of the homogeneous system back to x / z, which
  /// turns (-x, -1) into x. Throws DegenerateError when z == 0.
  Vector back_map_point(const Vector& xz) const;
};

Homogenization homogenize(const QuadraticSystem& sys);

/// Radius below which b cannot lie in C(r):
///   min over b_k != 0 of sqrt(|b_k| / ||A_k||_2).
/// Throws DegenerateError when b = 0, and ZeroComponentError when some A_k is
/// zero while b_k is not.
double radius_lower_bound(const QuadraticSystem& sys, double tol = 1e-8);

/// Raised when A_k = 0 but b_k != 0: coordinate k of every point of C is 0.
class ZeroComponentError : public std::domain_error {
 public:
  ZeroComponentError(Index k)
      : std::domain_error("equation " + std::to_string(k) +
                          " has a zero matrix but a non-zero right-hand side"),
        component_(k) {}
  Index component() const { return component_; }

 private:
  Index component_;
};

/// Indices k with A_k = 0 (and no linear part) while b_k != 0.
std::vector<Index> zero_components(const QuadraticSystem& sys);

}  // namespace trisdp::chr
