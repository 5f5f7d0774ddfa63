#include "trisdp/chr/eig_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "trisdp/errors.hpp"

namespace trisdp::chr {

using geometry::PivotAnswer;
using geometry::PivotQuery;
using linalg::EigPair;

EigPivotOracle::EigPivotOracle(const QuadraticSystem& sys, double radius, EigOracleOptions options)
    : sys_(sys), radius_(radius), opts_(options) {
  if (!sys.homogeneous()) {
    throw std::logic_error("EigPivotOracle: system must be homogeneous");
  }
  if (!(radius > 0.0)) throw std::invalid_argument("EigPivotOracle: radius must be positive");
  row_abs_.reserve(sys.quad.size());
  for (const auto& a : sys.quad) row_abs_.push_back(a.row_abs_sums());
}

void EigPivotOracle::set_radius(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("EigPivotOracle: radius must be positive");
  radius_ = radius;
}

DenseMatrix EigPivotOracle::aggregate_dense(const Vector& c) const {
  DenseMatrix d = DenseMatrix::Zero(sys_.n, sys_.n);
  for (Index k = 0; k < sys_.m(); ++k) {
    if (c[k] == 0.0) continue;
    for (const auto& t : sys_.quad[k].entries()) {
      d(t.row, t.col) += c[k] * t.value;
      if (t.row != t.col) d(t.col, t.row) += c[k] * t.value;
    }
  }
  return d;
}

EigPair EigPivotOracle::run_power(const Vector& c, double tol, const linalg::EarlyStop& stop,
                                  const std::optional<Vector>& start) {
  Vector bound = Vector::Zero(sys_.n);
  for (Index k = 0; k < sys_.m(); ++k) bound += std::abs(c[k]) * row_abs_[k];
  linalg::PowerOptions po;
  po.tol = tol;
  po.max_iters = opts_.max_iters;
  po.seed = opts_.seed + 7919 * calls_;
  po.shift = sys_.n ? bound.maxCoeff() : 0.0;
  po.start = start;
  po.early_stop = stop;
  auto apply = [this, &c](const Vector& in, Vector& out) {
    for (Index k = 0; k < sys_.m(); ++k) {
      if (c[k] != 0.0) linalg::matvec_add(sys_.quad[k], in, c[k], out);
    }
  };
  try {
    EigPair e = linalg::max_eig(apply, sys_.n, po);
    power_steps_ += e.iterations;
    return e;
  } catch (const linalg::ConvergenceError& err) {
    power_steps_ += err.best().iterations;
    throw;
  }
}

PivotAnswer EigPivotOracle::answer_from(const Vector& c, const EigPair& eig, bool maximal) {
  PivotAnswer ans;
  const double r2 = radius_ * radius_;
  Vector x = eig.lambda > 0.0 ? Vector(radius_ * eig.vector) : Vector(Vector::Zero(sys_.n));
  ans.candidate.point = eval_Q(sys_, x);
  ans.candidate.score = c.dot(ans.candidate.point);
  ans.candidate.payload = std::move(x);
  ans.candidate.aux = eig.lambda;
  ans.maximal = maximal;
  ans.upper_bound = r2 * std::max(eig.lambda + eig.residual_norm, 0.0);
  return ans;
}

EigPair EigPivotOracle::probe(const Vector& c, bool exact) {
  if (c.size() != sys_.m()) throw DimensionError("probe: direction length != m");
  if (exact && sys_.n <= opts_.dense_limit) {
    ++dense_solves_;
    return linalg::dense_max_eig(aggregate_dense(c));
  }
  ++calls_;
  return run_power(c, opts_.tol, {}, std::nullopt);
}

PivotAnswer EigPivotOracle::maximize(const PivotQuery& query) {
  const Vector& c = query.direction;
  if (c.size() != sys_.m()) throw DimensionError("EigPivotOracle: direction length != m");
  if (c.squaredNorm() == 0.0) throw DegenerateError("EigPivotOracle: zero direction");
  ++calls_;
  const double r2 = radius_ * radius_;

  if (query.early_threshold <= 0.0) {
    // Q(0) = 0 already clears the strict threshold.
    EigPair zero;
    zero.lambda = 0.0;
    zero.vector = Vector::Zero(sys_.n);
    return answer_from(c, zero, false);
  }

  std::optional<Vector> start;
  if (warm_) {
    start = *warm_ + 1e-3 * linalg::random_unit_vector(sys_.n, opts_.seed + calls_);
  }
  const double early = query.early_threshold;
  auto stop = [r2, early](double rho, const Vector&) { return r2 * rho >= early; };

  const bool dense_ok = sys_.n <= opts_.dense_limit;
  auto dense_answer = [&]() {
    ++dense_solves_;
    EigPair e = linalg::dense_max_eig(aggregate_dense(c));
    warm_ = e.vector;
    PivotAnswer a = answer_from(c, e, true);
    // Dense eigenvalues are accurate to a few ulps of the matrix norm.
    a.upper_bound = r2 * std::max(e.lambda + e.residual_norm + 1e-13 * std::abs(e.lambda), 0.0);
    return a;
  };

  EigPair eig;
  try {
    eig = run_power(c, opts_.tol, stop, start);
  } catch (const linalg::ConvergenceError& err) {
    if (dense_ok) return dense_answer();
    warm_ = err.best().vector;
    return answer_from(c, err.best(), false);
  }
  warm_ = eig.vector;
  if (eig.early_stopped) return answer_from(c, eig, false);

  PivotAnswer ans = answer_from(c, eig, true);
  double tol = opts_.tol;
  for (int round = 0; round < 2; ++round) {
    const bool decisive = ans.upper_bound < query.decision_threshold ||
                          ans.candidate.score >= query.usable_threshold;
    if (decisive) break;
    tol *= 1e-2;
    try {
      eig = run_power(c, tol, stop, eig.vector);
    } catch (const linalg::ConvergenceError&) {
      break;
    }
    warm_ = eig.vector;
    if (eig.early_stopped) return answer_from(c, eig, false);
    ans = answer_from(c, eig, true);
  }
  const bool decisive = ans.upper_bound < query.decision_threshold ||
                        ans.candidate.score >= query.usable_threshold;
  const bool claims_witness = ans.upper_bound < query.decision_threshold &&
                              ans.candidate.score < query.usable_threshold;
  if (dense_ok && (!decisive || (claims_witness && opts_.exact_check))) {
    PivotAnswer d = dense_answer();
    return d;
  }
  return ans;
}

}  // namespace trisdp::chr
