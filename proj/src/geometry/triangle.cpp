#include "trisdp/geometry/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "trisdp/errors.hpp"

namespace trisdp::geometry {

namespace {

void check_dims(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

double slack(double threshold, double rel) { return rel * (1.0 + std::abs(threshold)); }

}  // namespace

FinitePointOracle::FinitePointOracle(std::vector<Vector> points) : points_(std::move(points)) {
  if (points_.empty()) throw DegenerateError("FinitePointOracle: empty point set");
  for (const auto& p : points_) check_dims(p, points_.front(), "FinitePointOracle");
}

PivotAnswer FinitePointOracle::maximize(const PivotQuery& query) {
  check_dims(query.direction, points_.front(), "FinitePointOracle::maximize");
  std::size_t best = 0;
  double best_score = query.direction.dot(points_[0]);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double s = query.direction.dot(points_[i]);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  PivotAnswer ans;
  ans.candidate.point = points_[best];
  ans.candidate.score = best_score;
  ans.candidate.payload = Vector::Constant(1, static_cast<double>(best));
  ans.upper_bound = best_score;
  ans.maximal = true;
  return ans;
}

bool is_pivot(const Vector& target, const Vector& iterate, const Vector& v) {
  check_dims(target, iterate, "is_pivot");
  check_dims(target, v, "is_pivot");
  return (target - iterate).dot(v) >= 0.5 * (target.squaredNorm() - iterate.squaredNorm());
}

bool is_strict_pivot(const Vector& target, const Vector& iterate, const Vector& v) {
  check_dims(target, iterate, "is_strict_pivot");
  check_dims(target, v, "is_strict_pivot");
  return (target - iterate).dot(v) >= target.squaredNorm() - iterate.dot(target);
}

StepResult step(const Vector& target, const Vector& iterate, const Vector& v) {
  check_dims(target, iterate, "step");
  check_dims(target, v, "step");
  const Vector dir = v - iterate;
  const double len2 = dir.squaredNorm();
  if (len2 == 0.0) throw DegenerateError("step: pivot coincides with the iterate");
  const double raw = (target - iterate).dot(dir) / len2;
  StepResult out;
  out.alpha = std::clamp(raw, 0.0, 1.0);
  out.next = (1.0 - out.alpha) * iterate + out.alpha * v;
  return out;
}

Hyperplane witness_hyperplane(const Vector& target, const Vector& iterate) {
  check_dims(target, iterate, "witness_hyperplane");
  Hyperplane h;
  h.normal = iterate - target;
  if (h.normal.squaredNorm() == 0.0) {
    throw DegenerateError("witness_hyperplane: iterate coincides with target");
  }
  h.offset = 0.5 * (iterate.squaredNorm() - target.squaredNorm());
  return h;
}

void GapTrace::record(std::size_t iteration, double gap) {
  if (iteration % stride_ != 0) return;
  entries_.emplace_back(iteration, gap);
  if (entries_.size() >= cap_) {
    std::size_t keep = 0;
    for (std::size_t i = 0; i < entries_.size(); i += 2) entries_[keep++] = entries_[i];
    entries_.resize(keep);
    stride_ *= 2;
  }
}

const ChmState& ChmOutcome::state() const {
  return std::visit([](const auto& r) -> const ChmState& { return r.state; }, result);
}

ChmOutcome run_chm(PivotOracle& oracle, const Vector& target, const Vector& p_init,
                   const ChmOptions& options, const StepObserver& observer) {
  check_dims(target, p_init, "run_chm");
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("run_chm: epsilon must be positive");
  if (options.max_iters < 1) throw std::invalid_argument("run_chm: max_iters must be >= 1");

  ChmState state{target, p_init, (target - p_init).norm(), 0};
  GapTrace trace(options.trace_cap);
  const double target_sq = target.squaredNorm();

  auto finish = [&](auto&& result) {
    return ChmOutcome{std::forward<decltype(result)>(result), std::move(trace)};
  };

  while (true) {
    const Vector c = target - state.iterate;
    state.gap = c.norm();
    trace.record(state.iterations, state.gap);
    if (state.gap <= options.epsilon) return finish(ChmConverged{state});
    if (state.iterations >= options.max_iters) return finish(ChmExhausted{state});

    const double strict_thr = target_sq - state.iterate.dot(target);
    const double plain_thr = 0.5 * (target_sq - state.iterate.squaredNorm());
    const double strict_tol = slack(strict_thr, options.threshold_rel_tol);
    const double plain_tol = slack(plain_thr, options.threshold_rel_tol);
    const bool strict_rule = options.witness_rule == WitnessRule::kNoStrictPivot;
    const double decision = strict_rule ? strict_thr : plain_thr;
    const double decision_tol = strict_rule ? strict_tol : plain_tol;

    PivotAnswer ans;
    try {
      ans = oracle.maximize(PivotQuery{c, strict_thr - strict_tol, decision - decision_tol,
                                       plain_thr - plain_tol});
    } catch (const std::exception& e) {
      return finish(ChmInconclusive{state, std::string("oracle failure: ") + e.what()});
    }
    ++state.iterations;

    const double score = ans.candidate.score;
    StepKind kind;
    if (score >= strict_thr - strict_tol) {
      kind = StepKind::kStrict;
    } else if (ans.maximal && ans.upper_bound < decision - decision_tol) {
      ChmWitness w{state, witness_hyperplane(target, state.iterate), std::move(ans),
                   options.witness_rule};
      return finish(std::move(w));
    } else if (score >= plain_thr - plain_tol && score > c.dot(state.iterate)) {
      kind = StepKind::kPlain;
    } else {
      return finish(ChmInconclusive{
          state, ans.maximal ? "oracle bound too loose to decide between pivot and witness"
                             : "oracle stopped without a pivot"});
    }

    StepResult s = step(target, state.iterate, ans.candidate.point);
    const double new_gap = (target - s.next).norm();
    const double rounding = 1e-14 * (std::sqrt(target_sq) + ans.candidate.point.norm());
    if (new_gap > state.gap * (1.0 + 1e-12) + rounding) {
      return finish(ChmInconclusive{state, "step increased the gap"});
    }
    const double before = state.gap;
    state.iterate = std::move(s.next);
    state.gap = new_gap;
    if (observer) {
      auto moved =
          observer(ChmStepEvent{state.iterations, s.alpha, kind, &ans.candidate, before, new_gap,
                                &state.iterate});
      if (moved) {
        check_dims(target, *moved, "run_chm replacement iterate");
        const double moved_gap = (target - *moved).norm();
        if (moved_gap > new_gap * (1.0 + 1e-12) + rounding) {
          return finish(ChmInconclusive{state, "replacement iterate increased the gap"});
        }
        state.iterate = std::move(*moved);
        state.gap = moved_gap;
      }
    }
  }
}

}  // namespace trisdp::geometry
