#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>

#include "trisdp/linalg/sym_matrix.hpp"

namespace trisdp::linalg {

/// Writes A*in into out (out is pre-sized to n). Must represent a symmetric
/// operator.
using LinearOperator = std::function<void(const Vector& in, Vector& out)>;

/// Called after every power step with the current Rayleigh quotient and unit
/// iterate; returning true ends the iteration early.
using EarlyStop = std::function<bool(double rayleigh, const Vector& vector)>;

struct EigPair {
  double lambda = 0.0;
  Vector vector;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool early_stopped = false;
};

struct PowerOptions {
  double tol = 1e-8;
  /// 0 selects 10 n + 1000.
  std::size_t max_iters = 0;
  std::uint64_t seed = 0;
  /// Upper bound on |lambda| of the operator (e.g. a Gershgorin bound); the
  /// iteration runs on A + shift I so the largest algebraic eigenvalue is
  /// dominant.
  double shift = 0.0;
  /// Starting vector; a seeded random unit vector when absent.
  std::optional<Vector> start;
  EarlyStop early_stop;
};

/// Power iteration ran out of steps before converging or stopping early.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, EigPair best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const EigPair& best() const { return best_; }

 private:
  EigPair best_;
};

/// Deterministic pseudo-random unit vector of length n.
Vector random_unit_vector(Index n, std::uint64_t seed);

/// Largest algebraic eigenvalue of a symmetric operator by shifted power
/// iteration.
///
/// Converges when ||A v - rho v|| <= tol * max(1, |rho|). Throws
/// ConvergenceError carrying the last estimate when max_iters is exhausted
/// with neither convergence nor an early stop.
EigPair max_eig(const LinearOperator& apply, Index n, const PowerOptions& options);

/// Convenience overload for a stored matrix; the shift defaults to the
/// Gershgorin bound when options.shift is zero.
EigPair max_eig(const SymMatrix& a, PowerOptions options = {});

/// max(|lambda_max(X)|, |lambda_max(-X)|) via two power iterations.
double spectral_norm(const SymMatrix& x, double tol = 1e-8, std::uint64_t seed = 0);

/// Largest eigenpair from a dense symmetric eigensolver; used for the exact
/// cross-check on small orders.
EigPair dense_max_eig(const DenseMatrix& a);

}  // namespace trisdp::linalg
