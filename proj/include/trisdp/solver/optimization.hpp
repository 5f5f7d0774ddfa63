#pragma once

#include <vector>

#include "trisdp/solver/feasibility.hpp"

namespace trisdp::solver {

struct OptimizationOptions {
  /// Stop with `capped` set once a proposed objective value exceeds this.
  double objective_cap = 1e12;
  std::size_t max_rounds = 200;
};

struct OptimizationRound {
  double target = 0.0;
  Status status = Status::kInconclusive;
  std::size_t iterations = 0;
};

struct OptimizationResult {
  /// kFeasible when at least the base problem was solved.
  Status status = Status::kInconclusive;
  /// Objective A0 . X of the best certificate found (a lower estimate of the
  /// optimum up to the feasibility tolerance).
  double value = 0.0;
  /// Smallest value shown to be unattainable.
  double upper = 0.0;
  bool capped = false;
  std::size_t iterations = 0;
  std::vector<OptimizationRound> rounds;
  /// Last feasible solve of the system augmented with the objective as
  /// equation 0.
  SolveOutcome outcome;
  std::string reason;
};

/// max A0 . X subject to A(X) = b, Tr(X) <= r^2, X PSD, through a sequence of
/// feasibility problems for (A0 . X, A(X)) = (t, b).
///
/// Each proposal is the largest t admitting a strict pivot from the current
/// iterate; a witness at t makes t an upper end of the bracket and the next
/// target is the midpoint. Ends once the bracket is narrower than
/// cfg.epsilon.
OptimizationResult solve_optimization(const QuadraticSystem& sys, const linalg::SymMatrix& a0,
                                      double r, const SolveConfig& cfg,
                                      const OptimizationOptions& options = {});

}  // namespace trisdp::solver
