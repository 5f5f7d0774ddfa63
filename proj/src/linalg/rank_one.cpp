#include "trisdp/linalg/rank_one.hpp"

#include <cmath>
#include <numeric>

#include "trisdp/errors.hpp"

namespace trisdp::linalg {

namespace {

constexpr double kDropWeight = 1e-12;
constexpr double kPsdTol = 1e-8;

void drop_and_renormalize(RankOneDecomp& d) {
  std::erase_if(d.terms, [](const RankOneTerm& t) { return t.weight < kDropWeight; });
  double total = 0.0;
  for (const auto& t : d.terms) total += t.weight;
  if (total <= 0.0) throw DegenerateError("rank-one decomposition has no significant term");
  for (auto& t : d.terms) t.weight /= total;
}

}  // namespace

DenseMatrix RankOneDecomp::reconstruct(Index order) const {
  DenseMatrix x = DenseMatrix::Zero(order, order);
  for (const auto& t : terms) x.noalias() += t.weight * t.point * t.point.transpose();
  return x;
}

double min_eigenvalue(const DenseMatrix& x) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

DenseMatrix pivoted_cholesky(const DenseMatrix& x, double breakdown_rel, double psd_tol) {
  const Index n = x.rows();
  if (n != x.cols()) throw DimensionError("pivoted_cholesky: matrix is not square");
  DenseMatrix s = x;  // Schur complement, updated in place
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  DenseMatrix l = DenseMatrix::Zero(n, n);

  const double max_diag = n ? x.diagonal().maxCoeff() : 0.0;
  const double scale = std::max({max_diag, x.cwiseAbs().maxCoeff(), 0.0});
  const double stop = breakdown_rel * std::max(max_diag, 0.0);

  Index rank = 0;
  for (; rank < n; ++rank) {
    Index piv = rank;
    for (Index i = rank + 1; i < n; ++i) {
      if (s(perm[i], perm[i]) > s(perm[piv], perm[piv])) piv = i;
    }
    const double d = s(perm[piv], perm[piv]);
    if (d <= stop || d <= 0.0) break;
    std::swap(perm[rank], perm[piv]);
    const Index p = perm[rank];
    const double root = std::sqrt(d);
    l(p, rank) = root;
    for (Index i = rank + 1; i < n; ++i) l(perm[i], rank) = s(perm[i], p) / root;
    for (Index i = rank + 1; i < n; ++i) {
      for (Index j = rank + 1; j < n; ++j) {
        s(perm[i], perm[j]) -= l(perm[i], rank) * l(perm[j], rank);
      }
    }
  }

  // A PSD remainder has |s_ij| <= max diagonal; anything larger, or a
  // negative diagonal, means X was not PSD to begin with.
  const double allowed = std::max(stop, psd_tol * scale);
  for (Index i = rank; i < n; ++i) {
    for (Index j = rank; j < n; ++j) {
      const double v = s(perm[i], perm[j]);
      if ((i == j && v < -allowed) || std::abs(v) > allowed) {
        throw NotPsdError("pivoted_cholesky: matrix is not positive semidefinite");
      }
    }
  }
  return l.leftCols(rank);
}

RankOneDecomp psd_rank_one_decomp(const DenseMatrix& x, DecompMode mode) {
  const Index n = x.rows();
  if (n != x.cols() || n == 0) throw DimensionError("psd_rank_one_decomp: need a square matrix");
  const double tr = x.trace();
  if (!(tr > 0.0)) throw DegenerateError("psd_rank_one_decomp: trace must be positive");

  RankOneDecomp out;
  const double root_tr = std::sqrt(tr);
  if (mode == DecompMode::kSpectral) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(x);
    const Vector& lambda = es.eigenvalues();
    const double norm = std::max(std::abs(lambda[0]), std::abs(lambda[n - 1]));
    if (lambda[0] < -kPsdTol * norm) {
      throw NotPsdError("psd_rank_one_decomp: smallest eigenvalue " + std::to_string(lambda[0]) +
                        " is below tolerance");
    }
    for (Index i = n - 1; i >= 0; --i) {
      const double w = std::max(lambda[i], 0.0) / tr;
      out.terms.push_back({w, root_tr * es.eigenvectors().col(i)});
    }
  } else {
    const DenseMatrix l = pivoted_cholesky(x, 1e-12, kPsdTol);
    for (Index j = 0; j < l.cols(); ++j) {
      const double sq = l.col(j).squaredNorm();
      if (sq == 0.0) continue;
      out.terms.push_back({sq / tr, root_tr * l.col(j) / std::sqrt(sq)});
    }
  }
  drop_and_renormalize(out);
  return out;
}

RankOneDecomp psd_rank_one_decomp(const SymMatrix& x, DecompMode mode) {
  return psd_rank_one_decomp(x.to_dense(), mode);
}

}  // namespace trisdp::linalg
