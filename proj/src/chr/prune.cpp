#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "trisdp/chr/certificate.hpp"

namespace trisdp::chr {

namespace {

std::size_t hash_point(const Vector& x) {
  std::size_t h = static_cast<std::size_t>(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    h ^= std::hash<double>{}(x[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

ConvexCertificate merge_duplicates(const ConvexCertificate& cert) {
  ConvexCertificate out;
  out.radius = cert.radius;
  std::unordered_map<std::size_t, std::vector<std::size_t>> seen;
  for (const auto& t : cert.terms) {
    if (t.weight <= 0.0) continue;
    auto& bucket = seen[hash_point(t.point)];
    bool merged = false;
    for (std::size_t idx : bucket) {
      if (out.terms[idx].point == t.point) {
        out.terms[idx].weight += t.weight;
        merged = true;
        break;
      }
    }
    if (!merged) {
      bucket.push_back(out.terms.size());
      out.terms.push_back(t);
    }
  }
  return out;
}

}  // namespace

PruneResult caratheodory_prune(const ConvexCertificate& cert, const QuadraticSystem& sys) {
  PruneResult res;
  res.cert = merge_duplicates(cert);
  const Index m = sys.m();
  const auto t = static_cast<Index>(res.cert.terms.size());
  if (t <= m + 1) return res;

  // Lifted images (Q(x_i), 1), with the Q rows scaled to the order of 1.
  DenseMatrix lifted(m + 1, t);
  for (Index j = 0; j < t; ++j) lifted.col(j).head(m) = eval_Q(sys, res.cert.terms[j].point);
  const double scale = std::max(1.0, lifted.topRows(m).cwiseAbs().maxCoeff());
  lifted.topRows(m) /= scale;
  lifted.row(m).setOnes();

  Eigen::ColPivHouseholderQR<DenseMatrix> qr(lifted);
  qr.setThreshold(1e-11);
  const Index rank = qr.rank();
  if (rank == 0) {
    res.warning = "prune: lifted images have rank 0";
    return res;
  }
  std::vector<Index> basis(rank);
  std::vector<char> is_basic(t, 0);
  for (Index i = 0; i < rank; ++i) {
    basis[i] = qr.colsPermutation().indices()[i];
    is_basic[basis[i]] = 1;
  }
  DenseMatrix bcols(m + 1, rank);
  for (Index i = 0; i < rank; ++i) bcols.col(i) = lifted.col(basis[i]);
  // Tableau: column j of the lifted images in the coordinates of the basis.
  DenseMatrix tab = bcols.colPivHouseholderQr().solve(lifted);

  std::vector<double> w(t);
  for (Index j = 0; j < t; ++j) w[j] = res.cert.terms[j].weight;
  std::vector<char> alive(t, 1);

  for (Index j = 0; j < t; ++j) {
    if (is_basic[j] || !alive[j]) continue;
    // Dependency d = e_j - sum_i tab(i, j) e_basis[i]; move w -> w - theta d.
    double theta = w[j];
    Index leave = -1;
    for (Index i = 0; i < rank; ++i) {
      const double d = -tab(i, j);
      if (d > 1e-14 && w[basis[i]] / d < theta) {
        theta = w[basis[i]] / d;
        leave = i;
      }
    }
    for (Index i = 0; i < rank; ++i) w[basis[i]] += theta * tab(i, j);
    w[j] -= theta;
    if (leave < 0) {
      w[j] = 0.0;
      alive[j] = 0;
      continue;
    }
    const Index out_col = basis[leave];
    w[out_col] = 0.0;
    alive[out_col] = 0;
    is_basic[out_col] = 0;
    const double piv = tab(leave, j);
    tab.row(leave) /= piv;
    for (Index i = 0; i < rank; ++i) {
      if (i != leave && tab(i, j) != 0.0) tab.row(i) -= tab(i, j) * tab.row(leave);
    }
    basis[leave] = j;
    is_basic[j] = 1;
  }

  ConvexCertificate pruned;
  pruned.radius = res.cert.radius;
  double total = 0.0;
  for (Index j = 0; j < t; ++j) {
    if (alive[j] && w[j] > 0.0) {
      pruned.terms.push_back({w[j], res.cert.terms[j].point});
      total += w[j];
    }
  }
  if (pruned.terms.empty() || !(total > 0.0)) {
    res.warning = "prune: elimination removed every term";
    return res;
  }
  for (auto& term : pruned.terms) term.weight /= total;

  const Vector before = res.cert.image(sys);
  const Vector after = pruned.image(sys);
  if ((before - after).norm() > 1e-8 * (1.0 + before.norm())) {
    res.warning = "prune: numerical drift, certificate left unpruned";
    return res;
  }
  res.cert = std::move(pruned);
  return res;
}

}  // namespace trisdp::chr
