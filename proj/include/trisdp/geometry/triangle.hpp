#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "trisdp/linalg/sym_matrix.hpp"

namespace trisdp::geometry {

using linalg::Index;
using linalg::Vector;

/// A point of the convex set offered as the next pivot.
struct PivotCandidate {
  Vector point;
  /// direction^T point for the direction it was produced for.
  double score = 0.0;
  /// Oracle data behind the point, e.g. the x with point = Q(x).
  Vector payload;
  /// Oracle-specific scalar, e.g. the eigenvalue estimate.
  double aux = std::numeric_limits<double>::quiet_NaN();
};

struct PivotAnswer {
  PivotCandidate candidate;
  /// Upper bound on max{direction^T y : y in C}. Equal to candidate.score for
  /// exact maximizers; meaningful only when `maximal` is set.
  double upper_bound = std::numeric_limits<double>::infinity();
  /// True when the candidate comes from a converged maximization rather than
  /// an early stop.
  bool maximal = false;
};

struct PivotQuery {
  const Vector& direction;
  /// The oracle may stop as soon as it finds a point scoring at least this.
  double early_threshold;
  /// When the oracle cannot stop early it must report a maximal answer whose
  /// upper bound is decisive against this threshold (strictly below it), or
  /// whose score reaches `usable_threshold`.
  double decision_threshold;
  double usable_threshold;
};

/// Linear maximization oracle over a compact convex set C.
class PivotOracle {
 public:
  virtual ~PivotOracle() = default;
  virtual PivotAnswer maximize(const PivotQuery& query) = 0;
};

/// Oracle over the convex hull of a finite point list; exact.
class FinitePointOracle final : public PivotOracle {
 public:
  explicit FinitePointOracle(std::vector<Vector> points);
  PivotAnswer maximize(const PivotQuery& query) override;
  const std::vector<Vector>& points() const { return points_; }

 private:
  std::vector<Vector> points_;
};

/// Hyperplane {x : normal^T x = offset}.
struct Hyperplane {
  Vector normal;
  double offset = 0.0;

  double evaluate(const Vector& x) const { return normal.dot(x) - offset; }
};

struct ChmState {
  Vector target;
  Vector iterate;
  double gap = 0.0;
  std::size_t iterations = 0;
};

struct StepResult {
  double alpha = 0.0;
  Vector next;
};

/// (target - iterate)^T v >= (||target||^2 - ||iterate||^2) / 2.
bool is_pivot(const Vector& target, const Vector& iterate, const Vector& v);
/// (target - iterate)^T v >= ||target||^2 - iterate^T target.
bool is_strict_pivot(const Vector& target, const Vector& iterate, const Vector& v);

/// Moves the iterate to the point of segment [iterate, v] closest to the
/// target. Throws DegenerateError when v == iterate.
StepResult step(const Vector& target, const Vector& iterate, const Vector& v);

/// Orthogonal bisector of the segment target-iterate, oriented so the target
/// lies on the negative side. Throws DegenerateError at zero gap.
Hyperplane witness_hyperplane(const Vector& target, const Vector& iterate);

enum class WitnessRule {
  /// Stop as soon as the maximizer is not a strict pivot; certifies only that
  /// the target is outside C.
  kNoStrictPivot,
  /// Keep stepping with plain pivots and stop only when none exists, so the
  /// bisector separates and the gap is within a factor two of the distance.
  kNoPivot,
};

enum class StepKind { kStrict, kPlain };

struct ChmStepEvent {
  std::size_t iteration = 0;
  double alpha = 0.0;
  StepKind kind = StepKind::kStrict;
  const PivotCandidate* pivot = nullptr;
  double gap_before = 0.0;
  double gap_after = 0.0;
  /// Iterate after the step.
  const Vector* iterate = nullptr;
};

/// Called after every accepted step. May return a replacement iterate, which
/// must lie in C and be no farther from the target (e.g. after re-weighting
/// stored pivots); the engine rejects a replacement that increases the gap.
using StepObserver = std::function<std::optional<Vector>(const ChmStepEvent&)>;

struct ChmOptions {
  double epsilon = 1e-6;
  std::size_t max_iters = 100000;
  WitnessRule witness_rule = WitnessRule::kNoPivot;
  /// Relative slack on pivot inequalities.
  double threshold_rel_tol = 1e-12;
  std::size_t trace_cap = 100000;
};

/// Gap history, thinned by stride doubling once it reaches its capacity.
class GapTrace {
 public:
  explicit GapTrace(std::size_t cap = 100000) : cap_(cap < 2 ? 2 : cap) {}
  void record(std::size_t iteration, double gap);
  const std::vector<std::pair<std::size_t, double>>& entries() const { return entries_; }
  std::size_t stride() const { return stride_; }

 private:
  std::size_t cap_;
  std::size_t stride_ = 1;
  std::vector<std::pair<std::size_t, double>> entries_;
};

struct ChmConverged {
  ChmState state;
};
struct ChmWitness {
  ChmState state;
  Hyperplane hyperplane;
  /// Last oracle answer; no pivot among its set under the chosen rule.
  PivotAnswer last_answer;
  WitnessRule rule = WitnessRule::kNoPivot;
};
struct ChmExhausted {
  ChmState state;
};
struct ChmInconclusive {
  ChmState state;
  std::string reason;
};

struct ChmOutcome {
  std::variant<ChmConverged, ChmWitness, ChmExhausted, ChmInconclusive> result;
  GapTrace trace;

  const ChmState& state() const;
};

/// Triangle Algorithm for point-in-convex-set membership.
///
/// Starting from p_init in C, repeatedly asks the oracle for a maximizer of
/// (target - iterate)^T x and steps toward it; stops with Converged once the
/// gap is at most epsilon, with a witness when the maximizer fails the test
/// selected by `witness_rule`, or after max_iters oracle calls. Oracle
/// exceptions end the run as Inconclusive.
ChmOutcome run_chm(PivotOracle& oracle, const Vector& target, const Vector& p_init,
                   const ChmOptions& options, const StepObserver& observer = {});

}  // namespace trisdp::geometry
