#include "trisdp/chr/quadratic_system.hpp"

#include <cmath>
#include <limits>

#include "trisdp/errors.hpp"
#include "trisdp/linalg/power_iteration.hpp"

namespace trisdp::chr {

bool QuadraticSystem::homogeneous() const {
  if (lin) {
    for (const auto& c : *lin) {
      if (c.size() > 0 && !c.isZero(0.0)) return false;
    }
  }
  if (constant && constant->size() > 0 && !constant->isZero(0.0)) return false;
  return true;
}

void QuadraticSystem::validate() const {
  if (n < 1) throw DimensionError("system needs at least one variable");
  if (rhs.size() != m()) {
    throw DimensionError("rhs has length " + std::to_string(rhs.size()) + " but there are " +
                         std::to_string(m()) + " equations");
  }
  if (!rhs.allFinite()) throw DataError("rhs has non-finite entries");
  for (Index k = 0; k < m(); ++k) {
    if (quad[k].order() != n) {
      throw DimensionError("matrix " + std::to_string(k) + " has order " +
                           std::to_string(quad[k].order()) + ", expected " + std::to_string(n));
    }
  }
  if (lin) {
    if (static_cast<Index>(lin->size()) != m()) throw DimensionError("lin count != m");
    for (const auto& c : *lin) {
      if (c.size() != n) throw DimensionError("linear term length != n");
      if (!c.allFinite()) throw DataError("linear term has non-finite entries");
    }
  }
  if (constant) {
    if (constant->size() != m()) throw DimensionError("constant count != m");
    if (!constant->allFinite()) throw DataError("constant term has non-finite entries");
  }
}

QuadraticSystem QuadraticSystem::homogeneous_system(std::vector<SymMatrix> quad, Vector rhs) {
  QuadraticSystem sys;
  sys.n = quad.empty() ? 0 : quad.front().order();
  sys.quad = std::move(quad);
  sys.rhs = std::move(rhs);
  sys.validate();
  return sys;
}

Vector eval_Q(const QuadraticSystem& sys, const Vector& x) {
  if (x.size() != sys.n) {
    throw DimensionError("eval_Q: point has length " + std::to_string(x.size()) +
                         ", expected " + std::to_string(sys.n));
  }
  Vector out(sys.m());
  Vector ax(sys.n);
  for (Index k = 0; k < sys.m(); ++k) {
    ax.setZero();
    linalg::matvec_add(sys.quad[k], x, 1.0, ax);
    double v = x.dot(ax);
    if (sys.lin) v += (*sys.lin)[k].dot(x);
    if (sys.constant) v += (*sys.constant)[k];
    out[k] = v;
  }
  return out;
}

Vector apply_A(const QuadraticSystem& sys, const SymMatrix& x) {
  if (!sys.homogeneous()) {
    throw std::logic_error("apply_A: system has linear or constant terms; homogenize first");
  }
  if (x.order() != sys.n) throw DimensionError("apply_A: matrix order != n");
  Vector out(sys.m());
  for (Index k = 0; k < sys.m(); ++k) out[k] = linalg::frob_inner(sys.quad[k], x);
  return out;
}

Vector apply_A(const QuadraticSystem& sys, const DenseMatrix& x) {
  if (!sys.homogeneous()) {
    throw std::logic_error("apply_A: system has linear or constant terms; homogenize first");
  }
  if (x.rows() != sys.n || x.cols() != sys.n) throw DimensionError("apply_A: matrix order != n");
  Vector out(sys.m());
  for (Index k = 0; k < sys.m(); ++k) {
    double s = 0.0;
    for (const auto& t : sys.quad[k].entries()) {
      s += t.row == t.col ? t.value * x(t.row, t.row)
                          : t.value * (x(t.row, t.col) + x(t.col, t.row));
    }
    out[k] = s;
  }
  return out;
}

Vector Homogenization::back_map_point(const Vector& xz) const {
  if (!added_z) {
    if (xz.size() != original_n) throw DimensionError("back_map_point: wrong length");
    return xz;
  }
  if (xz.size() != original_n + 1) throw DimensionError("back_map_point: wrong length");
  const double z = xz[original_n];
  if (z == 0.0) throw DegenerateError("back_map_point: z = 0 has no preimage");
  return xz.head(original_n) / z;
}

Homogenization homogenize(const QuadraticSystem& sys) {
  sys.validate();
  Homogenization h;
  h.original_n = sys.n;
  h.original_m = sys.m();
  if (sys.homogeneous()) {
    h.system = sys;
    h.system.lin.reset();
    h.system.constant.reset();
    h.warning = "system is already homogeneous";
    return h;
  }

  Vector rhs = sys.rhs;
  if (sys.constant) rhs -= *sys.constant;

  bool has_lin = false;
  if (sys.lin) {
    for (const auto& c : *sys.lin) has_lin = has_lin || !c.isZero(0.0);
  }

  QuadraticSystem out;
  if (!has_lin) {
    out.n = sys.n;
    out.quad = sys.quad;
    out.rhs = rhs;
    h.system = std::move(out);
    return h;
  }

  const Index n = sys.n;
  out.n = n + 1;
  for (Index k = 0; k < sys.m(); ++k) {
    std::vector<linalg::Triplet> t(sys.quad[k].entries().begin(), sys.quad[k].entries().end());
    const Vector& c = (*sys.lin)[k];
    for (Index i = 0; i < n; ++i) {
      if (c[i] != 0.0) t.push_back({i, n, 0.5 * c[i]});
    }
    out.quad.push_back(SymMatrix::from_triplets(n + 1, std::move(t)));
  }
  out.quad.push_back(SymMatrix::from_triplets(n + 1, {{n, n, 1.0}}));
  out.rhs.resize(sys.m() + 1);
  out.rhs.head(sys.m()) = rhs;
  out.rhs[sys.m()] = 1.0;
  h.system = std::move(out);
  h.added_z = true;
  return h;
}

std::vector<Index> zero_components(const QuadraticSystem& sys) {
  std::vector<Index> out;
  for (Index k = 0; k < sys.m(); ++k) {
    bool zero = true;
    for (const auto& t : sys.quad[k].entries()) zero = zero && t.value == 0.0;
    if (sys.lin && !(*sys.lin)[k].isZero(0.0)) zero = false;
    if (zero && sys.rhs[k] != 0.0) out.push_back(k);
  }
  return out;
}

double radius_lower_bound(const QuadraticSystem& sys, double tol) {
  if (!sys.homogeneous()) {
    throw std::logic_error("radius_lower_bound: system must be homogeneous");
  }
  if (sys.rhs.isZero(0.0)) throw DegenerateError("radius_lower_bound: b = 0");
  double best = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < sys.m(); ++k) {
    if (sys.rhs[k] == 0.0) continue;
    double norm;
    try {
      norm = linalg::spectral_norm(sys.quad[k], tol, static_cast<std::uint64_t>(k));
    } catch (const linalg::ConvergenceError&) {
      // Gershgorin over-estimates the norm, which keeps the bound valid.
      norm = sys.quad[k].gershgorin_bound();
    }
    if (norm == 0.0) throw ZeroComponentError(k);
    best = std::min(best, std::sqrt(std::abs(sys.rhs[k]) / norm));
  }
  return best;
}

}  // namespace trisdp::chr
