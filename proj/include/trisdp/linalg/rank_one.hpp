#pragma once

#include <vector>

#include "trisdp/linalg/sym_matrix.hpp"

namespace trisdp::linalg {

struct RankOneTerm {
  double weight = 0.0;
  Vector point;
};

/// X = sum_i weight_i * point_i point_i^T with non-negative weights summing
/// to one.
struct RankOneDecomp {
  std::vector<RankOneTerm> terms;

  DenseMatrix reconstruct(Index order) const;
};

enum class DecompMode { kSpectral, kCholesky };

/// Lower-trapezoidal factor of a PSD matrix by diagonally pivoted Cholesky:
/// X ~= L L^T with L of size n x rank. Stops once the largest remaining
/// diagonal is at most breakdown_rel * max diagonal. Throws NotPsdError when
/// the remaining Schur complement is not consistent with a PSD matrix at
/// tolerance psd_tol * scale.
DenseMatrix pivoted_cholesky(const DenseMatrix& x, double breakdown_rel = 1e-12,
                             double psd_tol = 1e-8);

/// Splits a PSD matrix into a convex combination of rank-one matrices.
///
/// Spectral mode uses weight lambda_i / Tr(X) and point sqrt(Tr(X)) u_i, so
/// every point has norm sqrt(Tr(X)). Cholesky mode rescales the columns of a
/// pivoted Cholesky factor into the same form. Weights below 1e-12 are
/// dropped and the rest renormalized.
RankOneDecomp psd_rank_one_decomp(const SymMatrix& x, DecompMode mode = DecompMode::kSpectral);
RankOneDecomp psd_rank_one_decomp(const DenseMatrix& x, DecompMode mode = DecompMode::kSpectral);

/// Smallest eigenvalue of a dense symmetric matrix.
double min_eigenvalue(const DenseMatrix& x);

}  // namespace trisdp::linalg
