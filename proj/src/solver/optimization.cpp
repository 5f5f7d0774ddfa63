#include "trisdp/solver/optimization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trisdp/chr/eig_oracle.hpp"
#include "trisdp/errors.hpp"
#include "trisdp/linalg/power_iteration.hpp"

namespace trisdp::solver {

namespace {

// Strict-pivot slack at target (b0 + delta, b) from iterate (b0, b'):
//   r^2 max(lambda_max(delta A0 + sum_k d_k A_k), 0) - delta b0 - delta^2 - d^T b.
class PivotSlack {
 public:
  PivotSlack(const QuadraticSystem& aug, double r, const Vector& b, const Vector& image,
             const SolveConfig& cfg)
      : oracle_(aug, r, oracle_opts(cfg)), r_(r), b_(b), b0_(image[0]) {
    d_ = b - image.tail(b.size());
  }

  double operator()(double delta) {
    Vector c(d_.size() + 1);
    c[0] = delta;
    c.tail(d_.size()) = d_;
    if (c.squaredNorm() == 0.0) return 0.0;
    double lam;
    try {
      const auto e = oracle_.probe(c, true);
      lam = e.lambda;
    } catch (const linalg::ConvergenceError& err) {
      lam = err.best().lambda + err.best().residual_norm;
    }
    return r_ * r_ * std::max(lam, 0.0) - delta * b0_ - delta * delta - d_.dot(b_);
  }

  double b0() const { return b0_; }
  const Vector& d() const { return d_; }

 private:
  static chr::EigOracleOptions oracle_opts(const SolveConfig& cfg) {
    chr::EigOracleOptions o;
    o.tol = std::min(cfg.eig_tol, 1e-10);
    o.seed = cfg.seed;
    return o;
  }

  chr::EigPivotOracle oracle_;
  double r_;
  Vector b_;
  double b0_;
  Vector d_;
};

double norm2(const linalg::SymMatrix& a) {
  try {
    return linalg::spectral_norm(a, 1e-8);
  } catch (const linalg::ConvergenceError&) {
    return a.gershgorin_bound();
  }
}

}  // namespace

OptimizationResult solve_optimization(const QuadraticSystem& input, const linalg::SymMatrix& a0_in,
                                      double r, const SolveConfig& cfg,
                                      const OptimizationOptions& options) {
  if (!(r > 0.0)) throw std::invalid_argument("solve_optimization: r must be positive");
  input.validate();
  QuadraticSystem sys = input;
  linalg::SymMatrix a0 = a0_in;
  if (!sys.homogeneous()) {
    const auto h = chr::homogenize(input);
    sys = h.system;
    if (h.added_z) {
      std::vector<linalg::Triplet> t(a0.entries().begin(), a0.entries().end());
      a0 = linalg::SymMatrix::from_triplets(sys.n, std::move(t));
    }
  }
  if (a0.order() != sys.n) throw DimensionError("objective matrix order != n");

  OptimizationResult res;
  SolveConfig inner = cfg;
  inner.epsilon = cfg.epsilon / 4.0;

  SolveOutcome base = solve_feasibility(sys, inner, r, r);
  res.iterations += base.iterations;
  if (base.status != Status::kFeasible) {
    res.status = base.status;
    res.reason = "constraints are not feasible at the given radius";
    res.outcome = std::move(base);
    return res;
  }

  QuadraticSystem aug;
  aug.n = sys.n;
  aug.quad.reserve(sys.m() + 1);
  aug.quad.push_back(a0);
  for (const auto& a : sys.quad) aug.quad.push_back(a);
  aug.rhs.resize(sys.m() + 1);
  aug.rhs.tail(sys.m()) = sys.rhs;

  const double a0_norm = norm2(a0);
  double lam0;
  try {
    lam0 = linalg::max_eig(a0).lambda;
  } catch (const linalg::ConvergenceError& e) {
    lam0 = e.best().lambda + e.best().residual_norm;
  }
  double hi = r * r * std::max(lam0, 0.0) + 1e-12 * (1.0 + std::abs(lam0) * r * r);

  ConvexCertificate best = base.cert;
  SolveOutcome best_outcome = base;

  // Next target from the certificate: the largest strict-pivot admitting
  // value, also tightening the rigorous upper end `hi`.
  auto propose = [&](const ConvexCertificate& cert, double lo, double& upper) {
    aug.rhs[0] = 0.0;
    const Vector image = cert.image(aug);
    PivotSlack g(aug, r, sys.rhs, image, cfg);
    const double b0 = image[0];
    const double dn = std::sqrt(g.d().squaredNorm());
    double dnorm = 0.0;
    if (dn > 0.0) {
      DenseMatrix acc = DenseMatrix::Zero(sys.n, sys.n);
      for (Index k = 0; k < sys.m(); ++k) {
        for (const auto& t : sys.quad[k].entries()) acc(t.row, t.col) += g.d()[k] * t.value;
      }
      const DenseMatrix full = acc.selfadjointView<Eigen::Upper>();
      dnorm = norm2(linalg::SymMatrix::from_dense(full));
    }
    const double beta = r * r * a0_norm - b0;
    const double gamma = r * r * dnorm - g.d().dot(sys.rhs);
    const double disc = beta * beta + 4.0 * gamma;
    const double cap = disc < 0.0 ? 0.0 : std::max(0.0, 0.5 * (beta + std::sqrt(disc)));
    upper = std::min(upper, b0 + cap * (1.0 + 1e-12) + 1e-12);

    double best_delta = 0.0;
    if (cap > 0.0) {
      constexpr int kGrid = 16;
      double good = 0.0, bad = cap;
      for (int i = kGrid; i >= 1; --i) {
        const double delta = cap * i / kGrid;
        if (g(delta) >= 0.0) {
          good = delta;
          bad = i == kGrid ? delta : cap * (i + 1) / kGrid;
          break;
        }
      }
      if (good > 0.0 && bad > good) {
        for (int it = 0; it < 40 && bad - good > 1e-3 * cfg.epsilon; ++it) {
          const double mid = 0.5 * (good + bad);
          (g(mid) >= 0.0 ? good : bad) = mid;
        }
      }
      best_delta = good;
    }
    double t = b0 + best_delta;
    if (!(t > lo + 0.5 * cfg.epsilon) || t >= upper) t = 0.5 * (lo + upper);
    return std::pair<double, double>(b0, t);
  };

  auto [b0, target] = propose(best, -std::numeric_limits<double>::infinity(), hi);
  double lo = b0;
  best_outcome.system = aug;
  best_outcome.system.rhs[0] = b0;
  best_outcome.iterate = best.image(best_outcome.system);
  best_outcome.residual = (best_outcome.system.rhs - best_outcome.iterate).norm();
  best_outcome.refined.reset();
  if (target <= lo) target = 0.5 * (lo + hi);

  std::size_t round = 0;
  while (hi - lo > cfg.epsilon && round < options.max_rounds) {
    ++round;
    if (target > options.objective_cap) {
      res.capped = true;
      res.reason = "objective proposal exceeded the cap";
      break;
    }
    aug.rhs[0] = target;
    SolveHooks hooks;
    hooks.initial = best;
    SolveOutcome o = solve_feasibility(aug, inner, r, r, hooks);
    res.iterations += o.iterations;
    res.rounds.push_back({target, o.status, o.iterations});
    if (o.status == Status::kFeasible) {
      best = o.cert;
      best_outcome = std::move(o);
      auto [realized, next] = propose(best, lo, hi);
      lo = std::max(lo, realized);
      target = next;
    } else {
      // A witness at t > lo puts t beyond the largest attainable value; an
      // unresolved solve is treated the same way, which only costs accuracy.
      if (o.status != Status::kWitness) {
        res.reason = "a bisection step ended without a decision";
      }
      hi = std::min(hi, target);
      target = 0.5 * (lo + hi);
    }
  }
  if (hi - lo > cfg.epsilon && !res.capped && res.reason.empty()) {
    res.reason = "round limit reached before the bracket closed";
  }

  res.status = Status::kFeasible;
  res.value = lo;
  res.upper = std::max(hi, lo);
  res.outcome = std::move(best_outcome);
  return res;
}

}  // namespace trisdp::solver
