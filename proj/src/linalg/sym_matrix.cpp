#include "trisdp/linalg/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trisdp/errors.hpp"

namespace trisdp::linalg {

namespace {

bool coord_less(const Triplet& a, const Triplet& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

void check_order(Index order) {
  if (order < 0) throw DimensionError("matrix order must be non-negative");
}

}  // namespace

SymMatrix::SymMatrix(Index order) : order_(order) { check_order(order); }

SymMatrix SymMatrix::from_triplets(Index order, std::vector<Triplet> entries) {
  check_order(order);
  for (auto& t : entries) {
    if (t.row < 0 || t.col < 0 || t.row >= order || t.col >= order) {
      throw DataError("entry (" + std::to_string(t.row) + ", " +
                      std::to_string(t.col) + ") out of range for order " +
                      std::to_string(order));
    }
    if (!std::isfinite(t.value)) {
      throw DataError("non-finite value at (" + std::to_string(t.row) + ", " +
                      std::to_string(t.col) + ")");
    }
    if (t.row > t.col) std::swap(t.row, t.col);
  }
  std::sort(entries.begin(), entries.end(), coord_less);
  auto dup = std::adjacent_find(entries.begin(), entries.end(),
                                [](const Triplet& a, const Triplet& b) {
                                  return a.row == b.row && a.col == b.col;
                                });
  if (dup != entries.end()) {
    throw DataError("duplicate entry (" + std::to_string(dup->row) + ", " +
                    std::to_string(dup->col) + ")");
  }
  SymMatrix m(order);
  m.entries_ = std::move(entries);
  return m;
}

SymMatrix SymMatrix::from_dense(const DenseMatrix& dense, double drop_tol) {
  if (dense.rows() != dense.cols()) throw DimensionError("matrix is not square");
  SymMatrix m(dense.rows());
  for (Index i = 0; i < dense.rows(); ++i) {
    for (Index j = i; j < dense.cols(); ++j) {
      const double v = dense(i, j);
      if (!std::isfinite(v)) throw DataError("non-finite dense entry");
      if (std::abs(v) > drop_tol) m.entries_.push_back({i, j, v});
    }
  }
  return m;
}

SymMatrix SymMatrix::identity(Index order) {
  return diagonal(Vector::Ones(order));
}

SymMatrix SymMatrix::diagonal(const Vector& diag) {
  SymMatrix m(diag.size());
  for (Index i = 0; i < diag.size(); ++i) {
    if (diag[i] != 0.0) m.entries_.push_back({i, i, diag[i]});
  }
  return m;
}

DenseMatrix SymMatrix::to_dense() const {
  DenseMatrix d = DenseMatrix::Zero(order_, order_);
  for (const auto& t : entries_) {
    d(t.row, t.col) = t.value;
    d(t.col, t.row) = t.value;
  }
  return d;
}

double SymMatrix::trace() const {
  double s = 0.0;
  for (const auto& t : entries_) {
    if (t.row == t.col) s += t.value;
  }
  return s;
}

double SymMatrix::frobenius_norm() const { return std::sqrt(frob_inner(*this, *this)); }

SymMatrix SymMatrix::scaled(double factor) const {
  SymMatrix m = *this;
  for (auto& t : m.entries_) t.value *= factor;
  return m;
}

Vector SymMatrix::row_abs_sums() const {
  Vector sums = Vector::Zero(order_);
  for (const auto& t : entries_) {
    const double a = std::abs(t.value);
    sums[t.row] += a;
    if (t.row != t.col) sums[t.col] += a;
  }
  return sums;
}

double SymMatrix::gershgorin_bound() const {
  return order_ == 0 ? 0.0 : row_abs_sums().maxCoeff();
}

double frob_inner(const SymMatrix& x, const SymMatrix& y) {
  if (x.order() != y.order()) {
    throw DimensionError("frob_inner: orders " + std::to_string(x.order()) +
                         " and " + std::to_string(y.order()) + " differ");
  }
  const auto a = x.entries();
  const auto b = y.entries();
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (coord_less(a[i], b[j])) {
      ++i;
    } else if (coord_less(b[j], a[i])) {
      ++j;
    } else {
      const double p = a[i].value * b[j].value;
      s += a[i].row == a[i].col ? p : 2.0 * p;
      ++i;
      ++j;
    }
  }
  return s;
}

void matvec_add(const SymMatrix& x, const Vector& w, double scale, Vector& out) {
  if (w.size() != x.order() || out.size() != x.order()) {
    throw DimensionError("matvec: vector length does not match matrix order " +
                         std::to_string(x.order()));
  }
  for (const auto& t : x.entries()) {
    const double v = scale * t.value;
    out[t.row] += v * w[t.col];
    if (t.row != t.col) out[t.col] += v * w[t.row];
  }
}

Vector matvec(const SymMatrix& x, const Vector& w) {
  Vector out = Vector::Zero(x.order());
  matvec_add(x, w, 1.0, out);
  return out;
}

}  // namespace trisdp::linalg
