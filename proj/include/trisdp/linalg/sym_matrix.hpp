#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace trisdp::linalg {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Real symmetric matrix stored as its upper triangle in coordinate form.
///
/// Entries are kept sorted by (row, col) with row <= col and no repeated
/// coordinate; the logical matrix is the symmetric completion. Products and
/// sums iterate the stored entries in that order, so results are
/// bit-reproducible.
class SymMatrix {
 public:
  SymMatrix() = default;
  /// Zero matrix of the given order.
  explicit SymMatrix(Index order);

  /// Builds from (row, col, value) triplets. Lower-triangle coordinates are
  /// mirrored into the upper triangle. Throws DataError on out-of-range
  /// indices, non-finite values or a coordinate given twice.
  static SymMatrix from_triplets(Index order, std::vector<Triplet> entries);

  /// Reads the upper triangle of `dense`; entries with |value| <= drop_tol are
  /// not stored.
  static SymMatrix from_dense(const DenseMatrix& dense, double drop_tol = 0.0);

  static SymMatrix identity(Index order);
  static SymMatrix diagonal(const Vector& diag);

  Index order() const { return order_; }
  std::span<const Triplet> entries() const { return entries_; }
  std::size_t stored_count() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  DenseMatrix to_dense() const;
  double trace() const;
  double frobenius_norm() const;
  SymMatrix scaled(double factor) const;

  /// Row sums of |a_ij| over the full symmetric matrix.
  Vector row_abs_sums() const;
  /// Gershgorin upper bound on the spectral radius.
  double gershgorin_bound() const;

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  Index order_ = 0;
  std::vector<Triplet> entries_;
};

/// Frobenius (trace) inner product Tr(XY) of two symmetric matrices.
double frob_inner(const SymMatrix& x, const SymMatrix& y);

/// Symmetric product X w.
Vector matvec(const SymMatrix& x, const Vector& w);

/// out += scale * X w, without allocating.
void matvec_add(const SymMatrix& x, const Vector& w, double scale, Vector& out);

}  // namespace trisdp::linalg
