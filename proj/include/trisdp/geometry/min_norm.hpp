#pragma once

#include <cstddef>
#include <vector>

#include "trisdp/linalg/sym_matrix.hpp"

namespace trisdp::geometry {

using linalg::DenseMatrix;
using linalg::Vector;

/// Closest point to a fixed target within the convex hull of a growing point
/// set, by Wolfe's minimum-norm-point method.
///
/// The active set (corral) is affinely independent, so it never holds more
/// than dim + 1 points. Points enter through offer() and leave when their
/// weight drops to zero; each change updates a QR factor of the lifted
/// points (1, p_i - target) in O(k^2).
class MinNormCorral {
 public:
  explicit MinNormCorral(Vector target);

  /// Drops the corral and runs the full method over `points`.
  void reset(const std::vector<Vector>& points, const std::vector<std::size_t>& ids);

  /// Adds `point` to the corral when it improves the current point, then
  /// restores optimality. Returns true when the corral changed.
  bool offer(const Vector& point, std::size_t id);

  const std::vector<std::size_t>& ids() const { return ids_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Current closest point sum_i w_i p_i.
  Vector point() const;
  double gap() const;
  std::size_t size() const { return ids_.size(); }

 private:
  void add_column(const Vector& shifted, std::size_t id);
  void remove_column(std::size_t j);
  void minor_cycle();
  Vector solve_affine() const;
  void refresh_current();

  Vector target_;
  std::vector<std::size_t> ids_;
  std::vector<double> weights_;
  std::vector<Vector> shifted_;  // p_i - target
  DenseMatrix r_;                // k x k upper triangular
  Vector current_;               // sum_i w_i (p_i - target)
  double scale_ = 0.0;           // largest ||p_i - target||^2 seen
};

}  // namespace trisdp::geometry
