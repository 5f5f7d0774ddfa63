#pragma once

#include <cstdint>
#include <vector>

#include "trisdp/chr/quadratic_system.hpp"
#include "trisdp/solver/optimization.hpp"

namespace trisdp::apps {

struct Edge {
  linalg::Index u = 0;
  linalg::Index v = 0;
  double w = 1.0;
};

/// Undirected weighted graph without self-loops; edges stored with u < v.
struct Graph {
  linalg::Index n = 0;
  std::vector<Edge> edges;

  /// Throws DataError on self-loops, duplicates, bad indices or weights.
  void validate() const;
};

/// Sum over edges of w (1 - x_u x_v) / 2.
double maxcut_value(const Graph& g, const linalg::Vector& x);

/// L / 4 with L the weighted Laplacian, so (L/4) . x x^T is the cut of x.
linalg::SymMatrix maxcut_objective(const Graph& g);

/// Unit-diagonal constraints x_ii = 1.
chr::QuadraticSystem maxcut_constraints(const Graph& g);

struct GwResult {
  linalg::Vector best;
  double best_value = 0.0;
  std::size_t best_trial = 0;
  std::vector<double> values;
  double mean() const;
};

/// Goemans-Williamson hyperplane rounding of a unit-diagonal PSD matrix.
///
/// X = V V^T by pivoted Cholesky; trial t draws a Gaussian normal p from a
/// seed derived from (seed, t) and sets x_i = sign(p^T v_i), with +1 on ties.
/// The best trial wins, lowest index first.
GwResult gw_round(const linalg::DenseMatrix& x, const Graph& g, std::size_t trials,
                  std::uint64_t seed);

/// D^{-1/2} X D^{-1/2}, which puts ones on the diagonal.
linalg::DenseMatrix unit_diagonal(const linalg::DenseMatrix& x);

struct MaxcutResult {
  solver::OptimizationResult relaxation;
  /// Rounded from the relaxation matrix rescaled to unit diagonal.
  GwResult rounding;
  linalg::DenseMatrix gram;
};

/// Solves the MAX-CUT relaxation at radius r (default 1.1 sqrt(n)) and rounds.
MaxcutResult maxcut_solve(const Graph& g, const solver::SolveConfig& cfg, std::size_t trials,
                          double r = 0.0);

}  // namespace trisdp::apps
