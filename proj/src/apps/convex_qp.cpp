#include "trisdp/apps/convex_qp.hpp"

#include <cmath>

#include "trisdp/apps/trs.hpp"
#include "trisdp/errors.hpp"
#include "trisdp/linalg/rank_one.hpp"

namespace trisdp::apps {

using linalg::DenseMatrix;
using linalg::Index;
using linalg::Vector;

void ConvexQpSystem::validate() const {
  if (n < 1) throw DimensionError("convex QP needs at least one variable");
  if (static_cast<Index>(lin.size()) != m() || rhs.size() != m()) {
    throw DimensionError("convex QP: constraint parts have different counts");
  }
  for (Index k = 0; k < m(); ++k) {
    if (quad[k].order() != n || lin[k].size() != n) {
      throw DimensionError("convex QP: constraint " + std::to_string(k) + " has wrong size");
    }
    if (!lin[k].allFinite() || !std::isfinite(rhs[k])) {
      throw DataError("convex QP: non-finite data in constraint " + std::to_string(k));
    }
    const DenseMatrix a = quad[k].to_dense();
    const double norm = a.cwiseAbs().maxCoeff() * static_cast<double>(n);
    if (norm > 0.0 && linalg::min_eigenvalue(a) < -1e-8 * norm) {
      throw NotPsdError("convex QP: matrix " + std::to_string(k) + " is not PSD");
    }
  }
}

ConvexQpSystem ConvexQpSystem::from_system(const chr::QuadraticSystem& sys) {
  sys.validate();
  ConvexQpSystem qp;
  qp.n = sys.n;
  qp.quad = sys.quad;
  qp.rhs = sys.rhs;
  for (Index k = 0; k < sys.m(); ++k) {
    qp.lin.push_back(sys.lin ? (*sys.lin)[k] : Vector(Vector::Zero(sys.n)));
    if (sys.constant) qp.rhs[k] -= (*sys.constant)[k];
  }
  qp.validate();
  return qp;
}

chr::QuadraticSystem convexqp_instance(const ConvexQpSystem& qp) {
  qp.validate();
  const Index n = qp.n;
  const Index m = qp.m();
  chr::QuadraticSystem sys;
  sys.n = n + m;
  sys.lin.emplace();
  for (Index k = 0; k < m; ++k) {
    std::vector<linalg::Triplet> t(qp.quad[k].entries().begin(), qp.quad[k].entries().end());
    t.push_back({n + k, n + k, 1.0});
    sys.quad.push_back(linalg::SymMatrix::from_triplets(n + m, std::move(t)));
    Vector c = Vector::Zero(n + m);
    c.head(n) = qp.lin[k];
    sys.lin->push_back(std::move(c));
  }
  sys.rhs = qp.rhs;
  sys.validate();
  return sys;
}

TrsPivotOracle::TrsPivotOracle(const chr::QuadraticSystem& sys, double radius, double tol)
    : sys_(sys), radius_(radius), tol_(tol) {
  if (!(radius > 0.0)) throw std::invalid_argument("TrsPivotOracle: radius must be positive");
  for (const auto& a : sys.quad) dense_.push_back(a.to_dense());
}

geometry::PivotAnswer TrsPivotOracle::maximize(const geometry::PivotQuery& query) {
  const Vector& c = query.direction;
  if (c.size() != sys_.m()) throw DimensionError("TrsPivotOracle: direction length != m");
  if (c.squaredNorm() == 0.0) throw DegenerateError("TrsPivotOracle: zero direction");
  DenseMatrix a = DenseMatrix::Zero(sys_.n, sys_.n);
  Vector lin = Vector::Zero(sys_.n);
  double constant = 0.0;
  for (Index k = 0; k < sys_.m(); ++k) {
    if (c[k] == 0.0) continue;
    a += c[k] * dense_[k];
    if (sys_.lin) lin += c[k] * (*sys_.lin)[k];
    if (sys_.constant) constant += c[k] * (*sys_.constant)[k];
  }
  const TrsSolution sol = trs_solve(a, lin, radius_, tol_);
  geometry::PivotAnswer ans;
  ans.candidate.point = chr::eval_Q(sys_, sol.z);
  ans.candidate.score = c.dot(ans.candidate.point);
  ans.candidate.payload = sol.z;
  ans.candidate.aux = sol.value + constant;
  ans.maximal = true;
  const double top = std::max(ans.candidate.score, sol.value + constant);
  ans.upper_bound = top + 1e-12 * (1.0 + std::abs(top));
  return ans;
}

std::unique_ptr<geometry::PivotOracle> trs_pivot_oracle(const chr::QuadraticSystem& sys,
                                                        double radius, double tol) {
  return std::make_unique<TrsPivotOracle>(sys, radius, tol);
}

ConvexQpResult solve_convex_qp(const ConvexQpSystem& qp, const solver::SolveConfig& cfg,
                               double r_x, std::optional<double> r_max) {
  if (!(r_x >= 0.0)) throw std::invalid_argument("solve_convex_qp: r_x must be non-negative");
  const chr::QuadraticSystem sys = convexqp_instance(qp);
  double slack = 0.0;
  for (Index k = 0; k < qp.m(); ++k) slack += std::max(0.0, qp.rhs[k]);
  double r0 = r_x + std::sqrt(slack);
  if (!(r0 > 0.0)) r0 = 1.0;

  // The outcome owns a copy of the system; oracles must refer to that copy.
  solver::SolveHooks hooks;
  auto holder = std::make_shared<chr::QuadraticSystem>(sys);
  hooks.oracle_factory = [holder](double r) { return trs_pivot_oracle(*holder, r); };

  ConvexQpResult res;
  res.outcome = solver::solve_feasibility(sys, cfg, r0, r_max, hooks);
  if (res.outcome.status == solver::Status::kFeasible) {
    const auto& cert = res.outcome.cert;
    Vector xb = Vector::Zero(qp.n);
    chr::ConvexCertificate lifted;
    lifted.radius = std::sqrt(cert.radius * cert.radius + 1.0);
    for (const auto& t : cert.terms) {
      xb += t.weight * t.point.head(qp.n);
      Vector l(t.point.size() + 1);
      l.head(t.point.size()) = t.point;
      l[t.point.size()] = 1.0;
      lifted.terms.push_back({t.weight, std::move(l)});
    }
    res.x_bar = std::move(xb);
    res.lifted_psd = chr::cert_to_psd(lifted);
  }
  return res;
}

}  // namespace trisdp::apps
