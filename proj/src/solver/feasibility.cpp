#include "trisdp/solver/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include "trisdp/chr/eig_oracle.hpp"
#include "trisdp/errors.hpp"
#include "trisdp/geometry/min_norm.hpp"
#include "trisdp/linalg/power_iteration.hpp"

namespace trisdp::solver {

namespace {

// Scans recent pivots before asking the underlying oracle; a cached point
// that still clears the strict threshold is reused as is.
class CachedOracle final : public geometry::PivotOracle {
 public:
  CachedOracle(geometry::PivotOracle& inner, std::size_t capacity)
      : inner_(&inner), capacity_(capacity) {}

  void reset_inner(geometry::PivotOracle& inner) { inner_ = &inner; }

  geometry::PivotAnswer maximize(const geometry::PivotQuery& q) override {
    for (const auto& cand : cache_) {
      const double s = q.direction.dot(cand.point);
      if (s >= q.early_threshold) {
        geometry::PivotAnswer a;
        a.candidate = cand;
        a.candidate.score = s;
        a.maximal = false;
        ++hits_;
        return a;
      }
    }
    geometry::PivotAnswer a = inner_->maximize(q);
    if (capacity_ > 0 && a.candidate.payload.size() > 0 && a.candidate.payload.norm() > 0.0) {
      cache_.push_front(a.candidate);
      if (cache_.size() > capacity_) cache_.pop_back();
    }
    return a;
  }

  std::size_t hits() const { return hits_; }

 private:
  geometry::PivotOracle* inner_;
  std::size_t capacity_;
  std::deque<geometry::PivotCandidate> cache_;
  std::size_t hits_ = 0;
};

class TraceLog {
 public:
  explicit TraceLog(std::size_t cap) : cap_(std::max<std::size_t>(cap, 2)) {}

  void add(const TraceEntry& e) {
    if (e.action == TraceAction::kStep && e.iteration % stride_ != 0) return;
    entries_.push_back(e);
    if (entries_.size() >= cap_) {
      std::vector<TraceEntry> kept;
      for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i % 2 == 0 || entries_[i].action != TraceAction::kStep) kept.push_back(entries_[i]);
      }
      entries_ = std::move(kept);
      stride_ *= 2;
    }
  }

  std::vector<TraceEntry> take() { return std::move(entries_); }

 private:
  std::size_t cap_;
  std::size_t stride_ = 1;
  std::vector<TraceEntry> entries_;
};

// Certificate terms together with their images Q(x_i), so that pivots
// already found can be re-weighted without new oracle calls. With
// `corrective` set the weights always give the point of the hull of the
// stored pivots closest to b, and pivots that lose their weight are dropped.
class AtomSet {
 public:
  AtomSet(const QuadraticSystem& sys, const Vector& b, const ConvexCertificate& init,
          bool corrective)
      : sys_(sys), b_(b), corrective_(corrective), corral_(b) {
    for (const auto& t : init.terms) {
      if (t.weight <= 0.0) continue;
      w_.push_back(t.weight);
      x_.push_back(t.point);
      q_.push_back(chr::eval_Q(sys, t.point));
    }
    if (corrective_) rebuild_corral();
  }

  // Plain mode: (1 - alpha) * current + alpha * (1, x) with q = Q(x).
  // Corrective mode: adds (x, q) and re-solves for the closest point.
  // A pivot the corral refuses (an improvement lost in rounding) is taken
  // with the plain weights, and the corral waits for the next prune().
  void absorb(double alpha, const Vector& x, const Vector& q) {
    if (corrective_ && !stale_) {
      if (corral_.offer(q, next_id_)) {
        x_.push_back(x);
        q_.push_back(q);
        ids_.push_back(next_id_);
        ++next_id_;
        sync_corral();
        return;
      }
      if (!(alpha > 0.0)) return;
      stale_ = true;
    }
    if (alpha >= 1.0) {
      w_.assign(1, 1.0);
      x_.assign(1, x);
      q_.assign(1, q);
      return;
    }
    bool merged = false;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      w_[i] *= 1.0 - alpha;
      if (!merged && x_[i] == x) {
        w_[i] += alpha;
        merged = true;
      }
    }
    if (!merged && alpha > 0.0) {
      w_.push_back(alpha);
      x_.push_back(x);
      q_.push_back(q);
    }
    drop_zeros();
  }

  // Corrective mode refactors the corral from scratch, which also clears
  // accumulated rounding in its QR factor.
  std::string prune() {
    if (corrective_) {
      // The hull of the stored pivots contains the current point, but a
      // rebuild that fails to reach it in floating point must not lose
      // progress.
      const double before = (corral_target() - image()).norm();
      auto w = w_;
      auto x = x_;
      auto q = q_;
      rebuild_corral();
      if ((corral_target() - image()).norm() > before) {
        w_ = std::move(w);
        x_ = std::move(x);
        q_ = std::move(q);
        stale_ = true;
      }
      return {};
    }
    auto pr = chr::caratheodory_prune(certificate(0.0), sys_);
    w_.clear();
    x_.clear();
    q_.clear();
    for (auto& t : pr.cert.terms) {
      w_.push_back(t.weight);
      q_.push_back(chr::eval_Q(sys_, t.point));
      x_.push_back(std::move(t.point));
    }
    return pr.warning;
  }

  Vector image() const {
    Vector s = Vector::Zero(sys_.m());
    for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * q_[i];
    return s;
  }

  ConvexCertificate certificate(double radius) const {
    ConvexCertificate c;
    c.radius = radius;
    for (std::size_t i = 0; i < w_.size(); ++i) c.terms.push_back({w_[i], x_[i]});
    return c;
  }

  std::size_t size() const { return w_.size(); }
  /// Weights currently follow the corral.
  bool corrected() const { return corrective_ && !stale_; }
  double max_norm() const {
    double r = 0.0;
    for (const auto& x : x_) r = std::max(r, x.norm());
    return r;
  }
  DenseMatrix matrix() const {
    DenseMatrix mat = DenseMatrix::Zero(sys_.n, sys_.n);
    for (std::size_t i = 0; i < w_.size(); ++i) mat.noalias() += w_[i] * x_[i] * x_[i].transpose();
    return mat;
  }

 private:
  void drop_zeros() {
    std::size_t k = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (w_[i] > 0.0) {
        if (k != i) {
          w_[k] = w_[i];
          x_[k] = std::move(x_[i]);
          q_[k] = std::move(q_[i]);
        }
        ++k;
      }
    }
    w_.resize(k);
    x_.resize(k);
    q_.resize(k);
  }

  void rebuild_corral() {
    stale_ = false;
    ids_.clear();
    for (std::size_t i = 0; i < q_.size(); ++i) ids_.push_back(next_id_++);
    corral_.reset(q_, ids_);
    sync_corral();
  }

  // Keeps exactly the corral's atoms, in the corral's order.
  void sync_corral() {
    std::unordered_map<std::size_t, std::size_t> where;
    for (std::size_t i = 0; i < ids_.size(); ++i) where.emplace(ids_[i], i);
    std::vector<Vector> x, q;
    for (std::size_t id : corral_.ids()) {
      const std::size_t i = where.at(id);
      x.push_back(std::move(x_[i]));
      q.push_back(std::move(q_[i]));
    }
    x_ = std::move(x);
    q_ = std::move(q);
    ids_ = corral_.ids();
    w_ = corral_.weights();
  }

  const Vector& corral_target() const { return b_; }

  const QuadraticSystem& sys_;
  Vector b_;
  bool corrective_;
  bool stale_ = false;
  geometry::MinNormCorral corral_;
  std::vector<std::size_t> ids_;
  std::size_t next_id_ = 0;
  std::vector<double> w_;
  std::vector<Vector> x_;
  std::vector<Vector> q_;
};

double initial_radius(const QuadraticSystem& sys, const std::vector<Index>& zeros) {
  if (zeros.empty()) return chr::radius_lower_bound(sys);
  QuadraticSystem rest = sys;
  for (Index k : zeros) rest.rhs[k] = 0.0;
  if (rest.rhs.isZero(0.0)) return 1.0;
  return chr::radius_lower_bound(rest);
}

}  // namespace

void RadiusSchedule::double_radius() {
  if (at_max()) return;
  ++doublings;
  r = std::min(r0 * std::ldexp(1.0, doublings), r_max);
}

int RadiusSchedule::max_doublings() const {
  if (r_max <= r0) return 0;
  return static_cast<int>(std::ceil(std::log2(r_max / r0) - 1e-12));
}

const char* status_name(Status s) {
  switch (s) {
    case Status::kFeasible:
      return "feasible";
    case Status::kWitness:
      return "witness";
    case Status::kRadiusExceeded:
      return "radius_exceeded";
    case Status::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

SolveOutcome solve_feasibility(const QuadraticSystem& input, const SolveConfig& cfg,
                               std::optional<double> r0_opt, std::optional<double> rmax_opt,
                               const SolveHooks& hooks) {
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  input.validate();
  if (input.rhs.isZero(0.0)) throw DegenerateError("right-hand side b is zero");

  SolveOutcome out;
  const bool custom_oracle = static_cast<bool>(hooks.oracle_factory);
  if (!custom_oracle && !input.homogeneous()) {
    out.homogenization = chr::homogenize(input);
    out.system = out.homogenization->system;
  } else {
    out.system = input;
  }
  const QuadraticSystem& sys = out.system;
  const Vector& b = sys.rhs;
  const Index n = sys.n;
  const Index m = sys.m();

  std::vector<Index> zeros;
  if (!custom_oracle) zeros = chr::zero_components(sys);
  out.zero_component = !zeros.empty();

  double r0;
  if (r0_opt) {
    r0 = *r0_opt;
  } else if (custom_oracle) {
    throw std::invalid_argument("an initial radius is required with a custom oracle");
  } else {
    r0 = initial_radius(sys, zeros);
  }
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw std::invalid_argument("r0 must be positive");
  double r_max = rmax_opt ? *rmax_opt : 1024.0 * r0;
  if (!(r_max >= r0)) throw std::invalid_argument("r_max must be at least r0");
  if (out.zero_component) {
    r_max = r0;
    out.warnings.push_back("equation with zero matrix and non-zero right-hand side; "
                           "b lies outside C(r) for every r");
  }
  out.schedule = RadiusSchedule{r0, r0, r_max, 0};
  RadiusSchedule& sched = out.schedule;
  out.radius_history.push_back(r0);

  // Starting certificate and iterate.
  ConvexCertificate init;
  if (hooks.initial) {
    init = *hooks.initial;
    if (init.terms.empty()) throw std::invalid_argument("initial certificate is empty");
    for (const auto& t : init.terms) {
      if (t.point.size() != n) throw DimensionError("initial certificate has wrong point length");
    }
    const double norm = init.max_point_norm();
    while (norm > sched.r * (1.0 + 1e-12) && !sched.at_max()) {
      sched.double_radius();
      out.radius_history.push_back(sched.r);
    }
    if (norm > sched.r * (1.0 + 1e-12)) {
      throw std::invalid_argument("initial certificate lies outside r_max");
    }
  } else {
    init.terms.push_back({1.0, r0 * linalg::random_unit_vector(n, cfg.seed)});
  }
  const bool track = cfg.track_matrix_limit > 0 && n <= cfg.track_matrix_limit &&
                     sys.homogeneous();
  AtomSet atoms(sys, b, init, cfg.corrective);
  Vector iterate = atoms.image();

  chr::EigOracleOptions eopts;
  eopts.tol = cfg.eig_tol;
  eopts.seed = cfg.seed;
  eopts.exact_check = cfg.exact_eig;
  auto make_oracle = [&](double r) -> std::unique_ptr<geometry::PivotOracle> {
    if (custom_oracle) return hooks.oracle_factory(r);
    return std::make_unique<chr::EigPivotOracle>(sys, r, eopts);
  };
  std::unique_ptr<geometry::PivotOracle> inner = make_oracle(sched.r);
  CachedOracle oracle(*inner, cfg.pivot_cache);

  const std::size_t prune_period = cfg.prune_period ? cfg.prune_period : 4 * (m + 1);
  TraceLog trace(cfg.trace_cap);
  std::size_t used = 0;
  std::size_t steps_since_prune = 0;
  std::optional<Witness> last_witness;

  auto prune_now = [&]() {
    const std::string warning = atoms.prune();
    if (!warning.empty() && (out.warnings.empty() || out.warnings.back() != warning)) {
      out.warnings.push_back(warning);
    }
    steps_since_prune = 0;
  };

  auto observer = [&](const geometry::ChmStepEvent& ev) -> std::optional<Vector> {
    atoms.absorb(ev.alpha, ev.pivot->payload, ev.pivot->point);
    trace.add({used + ev.iteration, sched.r, ev.gap_after, ev.pivot->aux, TraceAction::kStep});
    bool moved = atoms.corrected();
    if (++steps_since_prune >= prune_period &&
        (cfg.corrective || atoms.size() > static_cast<std::size_t>(m + 1))) {
      prune_now();
      moved = true;
    }
    const Vector p = atoms.image();
    if (hooks.on_step) {
      const ConvexCertificate c = atoms.certificate(sched.r);
      std::optional<DenseMatrix> mat;
      if (track) mat = atoms.matrix();
      hooks.on_step(StepSnapshot{used + ev.iteration, sched.r, moved ? &p : ev.iterate, &c,
                                 mat ? &*mat : nullptr});
    }
    // Never hand back a point farther from b than the engine's own iterate.
    if (moved && (b - p).norm() <= ev.gap_after) return p;
    return std::nullopt;
  };

  auto finish_common = [&]() {
    out.iterations = used;
    out.iterate = iterate;
    out.residual = (b - iterate).norm();
    out.cert = atoms.certificate(sched.r);
    out.trace = trace.take();
  };

  int resumes = 0;
  while (true) {
    geometry::ChmOptions copts;
    copts.epsilon = cfg.epsilon;
    copts.max_iters = cfg.max_iters - used;
    copts.witness_rule = sched.at_max() ? geometry::WitnessRule::kNoPivot
                                        : geometry::WitnessRule::kNoStrictPivot;
    copts.trace_cap = 2;
    geometry::ChmOutcome res = geometry::run_chm(oracle, b, iterate, copts, observer);
    used += res.state().iterations;
    iterate = res.state().iterate;

    if (std::holds_alternative<geometry::ChmConverged>(res.result)) {
      prune_now();
      iterate = atoms.image();
      if ((b - iterate).norm() > cfg.epsilon && used < cfg.max_iters && resumes < 8) {
        ++resumes;
        continue;
      }
      if ((b - iterate).norm() > cfg.epsilon) {
        out.status = Status::kInconclusive;
        out.reason = "pruned certificate drifted above epsilon";
        finish_common();
        return out;
      }
      out.status = Status::kFeasible;
      finish_common();
      if (sys.homogeneous()) {
        out.psd = chr::cert_to_psd(out.cert);
        out.refined = chr::refine_cert(out.cert, sys, b);
      }
      if (out.homogenization && out.homogenization->added_z) {
        ConvexCertificate back;
        back.radius = 0.0;
        const Index zi = out.homogenization->original_n;
        for (const auto& t : out.cert.terms) {
          const double z = t.point[zi];
          if (z == 0.0) {
            out.warnings.push_back("certificate term with z = 0 has no preimage; dropped");
            continue;
          }
          back.terms.push_back({t.weight * z * z, t.point.head(zi) / z});
          back.radius = std::max(back.radius, back.terms.back().point.norm());
        }
        if (!back.terms.empty()) out.original_cert = std::move(back);
      } else if (out.homogenization) {
        out.original_cert = out.cert;
      }
      return out;
    }

    if (const auto* w = std::get_if<geometry::ChmWitness>(&res.result)) {
      Witness wit;
      wit.iterate = iterate;
      wit.iterate_cert = atoms.certificate(sched.r);
      wit.hyperplane = w->hyperplane;
      wit.radius = sched.r;
      wit.gap = w->state.gap;
      wit.lambda = w->last_answer.candidate.aux;
      wit.support_bound = w->last_answer.upper_bound;
      wit.rule = w->rule;
      last_witness = wit;
      if (sched.at_max()) {
        trace.add({used, sched.r, wit.gap, wit.lambda, TraceAction::kWitness});
        out.status = Status::kWitness;
        out.witness = std::move(wit);
        finish_common();
        return out;
      }
      sched.double_radius();
      out.radius_history.push_back(sched.r);
      trace.add({used, sched.r, wit.gap, wit.lambda, TraceAction::kDouble});
      inner = make_oracle(sched.r);
      oracle.reset_inner(*inner);
      if (used >= cfg.max_iters) {
        out.status = Status::kRadiusExceeded;
        out.reason = "iteration limit reached after radius doubling";
        out.witness = last_witness;
        finish_common();
        return out;
      }
      continue;
    }

    if (std::holds_alternative<geometry::ChmExhausted>(res.result)) {
      out.status = sched.doublings > 0 ? Status::kRadiusExceeded : Status::kInconclusive;
      out.reason = "iteration limit reached";
      out.witness = last_witness;
      finish_common();
      return out;
    }

    const auto& inc = std::get<geometry::ChmInconclusive>(res.result);
    out.status = Status::kInconclusive;
    out.reason = inc.reason;
    out.witness = last_witness;
    finish_common();
    return out;
  }
}

bool verify_witness(const QuadraticSystem& sys, double r, const Vector& b, const Vector& b_prime,
                    bool exact, double eig_tol) {
  if (!sys.homogeneous()) throw std::logic_error("verify_witness: system must be homogeneous");
  if (b.size() != sys.m() || b_prime.size() != sys.m()) {
    throw DimensionError("verify_witness: vector length != m");
  }
  const Vector c = b - b_prime;
  if (c.squaredNorm() == 0.0) return false;
  chr::EigOracleOptions opts;
  opts.tol = eig_tol;
  chr::EigPivotOracle oracle(sys, r, opts);
  double top;
  try {
    const linalg::EigPair e = oracle.probe(c, exact);
    top = e.lambda + (exact && sys.n <= opts.dense_limit ? 1e-13 * std::abs(e.lambda)
                                                         : e.residual_norm);
  } catch (const linalg::ConvergenceError&) {
    return false;
  }
  return r * r * std::max(top, 0.0) < b.squaredNorm() - b.dot(b_prime);
}

}  // namespace trisdp::solver
