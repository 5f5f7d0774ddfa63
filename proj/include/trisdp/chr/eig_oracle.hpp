#pragma once

#include <cstdint>
#include <optional>

#include "trisdp/chr/quadratic_system.hpp"
#include "trisdp/geometry/triangle.hpp"
#include "trisdp/linalg/power_iteration.hpp"

namespace trisdp::chr {

struct EigOracleOptions {
  double tol = 1e-8;
  std::size_t max_iters = 0;
  std::uint64_t seed = 0;
  /// Confirm every no-pivot verdict with a dense eigensolver (orders up to
  /// dense_limit only).
  bool exact_check = false;
  Index dense_limit = 200;
};

/// Pivot oracle over C(r) = conv{Q(x) : ||x|| <= r} for a homogeneous system.
///
/// For a direction c the maximum of c^T y over C(r) is
/// r^2 max(lambda_max(sum_k c_k A_k), 0), attained at Q(r u) for a top unit
/// eigenvector u (or at Q(0) = 0 when lambda_max < 0). The aggregate matrix is
/// never formed; power iteration applies sum_k c_k (A_k w) and stops as soon
/// as the Rayleigh quotient clears the query's early threshold.
///
/// Candidate payload is the point x, aux the eigenvalue estimate.
class EigPivotOracle final : public geometry::PivotOracle {
 public:
  EigPivotOracle(const QuadraticSystem& sys, double radius, EigOracleOptions options = {});

  geometry::PivotAnswer maximize(const geometry::PivotQuery& query) override;

  void set_radius(double radius);
  double radius() const { return radius_; }

  /// Fully converged top eigenpair of sum_k c_k A_k (dense when exact and the
  /// order allows).
  linalg::EigPair probe(const Vector& c, bool exact = false);

  /// Dense sum_k c_k A_k.
  DenseMatrix aggregate_dense(const Vector& c) const;

  std::size_t power_steps() const { return power_steps_; }
  std::size_t dense_solves() const { return dense_solves_; }

 private:
  linalg::EigPair run_power(const Vector& c, double tol, const linalg::EarlyStop& stop,
                            const std::optional<Vector>& start);
  geometry::PivotAnswer answer_from(const Vector& c, const linalg::EigPair& eig, bool maximal);

  const QuadraticSystem& sys_;
  double radius_;
  EigOracleOptions opts_;
  std::vector<Vector> row_abs_;
  std::optional<Vector> warm_;
  std::uint64_t calls_ = 0;
  std::size_t power_steps_ = 0;
  std::size_t dense_solves_ = 0;
};

}  // namespace trisdp::chr
