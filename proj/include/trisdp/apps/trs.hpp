#pragma once

#include <stdexcept>

#include "trisdp/linalg/sym_matrix.hpp"

namespace trisdp::apps {

using linalg::DenseMatrix;
using linalg::Index;
using linalg::SymMatrix;
using linalg::Vector;

/// Global maximizer of z^T A z + c^T z over ||z|| <= r.
///
/// In the minimization form min 1/2 z^T B z + g^T z with B = -2A, g = -c the
/// multiplier mu satisfies (B + mu I) z = -g, mu (||z|| - r) = 0 and
/// B + mu I PSD.
struct TrsSolution {
  Vector z;
  double value = 0.0;
  double mu = 0.0;
  bool boundary = false;
  bool hard_case = false;
  int root_iterations = 0;
};

struct KktReport {
  /// ||(B + mu I) z + g||.
  double stationarity = 0.0;
  /// |mu (||z|| - r)|.
  double complementarity = 0.0;
  /// Smallest eigenvalue of B + mu I.
  double min_eig = 0.0;
  /// max(0, ||z|| - r).
  double feasibility = 0.0;
};

class TrsError : public std::runtime_error {
 public:
  TrsError(const std::string& what, TrsSolution best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const TrsSolution& best() const { return best_; }

 private:
  TrsSolution best_;
};

/// Dense eigendecomposition of B followed by safeguarded Newton iteration on
/// 1/||z(mu)|| - 1/r. The hard case (g without weight on the bottom
/// eigenspace of B, below 1e-10 ||g||) fills the remaining norm with a bottom
/// eigenvector.
TrsSolution trs_solve(const DenseMatrix& a, const Vector& c, double r, double tol = 1e-14);
TrsSolution trs_solve(const SymMatrix& a, const Vector& c, double r, double tol = 1e-14);

KktReport trs_kkt(const DenseMatrix& a, const Vector& c, double r, const TrsSolution& sol);

}  // namespace trisdp::apps
