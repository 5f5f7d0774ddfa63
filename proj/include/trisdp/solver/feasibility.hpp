#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trisdp/chr/certificate.hpp"
#include "trisdp/chr/quadratic_system.hpp"
#include "trisdp/geometry/triangle.hpp"

namespace trisdp::solver {

using chr::ConvexCertificate;
using chr::PsdCertificate;
using chr::QuadraticSystem;
using linalg::DenseMatrix;
using linalg::Index;
using linalg::Vector;

/// r = min(r0 * 2^doublings, r_max).
struct RadiusSchedule {
  double r0 = 1.0;
  double r = 1.0;
  double r_max = 1.0;
  int doublings = 0;

  bool at_max() const { return r >= r_max; }
  void double_radius();
  /// ceil(log2(r_max / r0)).
  int max_doublings() const;
};

struct SolveConfig {
  double epsilon = 1e-6;
  std::size_t max_iters = 100000;
  double eig_tol = 1e-8;
  std::uint64_t seed = 0;
  /// Carathéodory pruning period in steps; 0 selects 4 (m + 1).
  std::size_t prune_period = 0;
  /// Confirm witness verdicts with a dense eigensolver (orders <= 200).
  bool exact_eig = false;
  std::size_t pivot_cache = 32;
  /// After every step move to the point of the hull of all stored pivots
  /// closest to b; off gives the plain Triangle iteration.
  bool corrective = true;
  std::size_t trace_cap = 100000;
  /// Hand the dense iterate matrix X' to the step hook (orders up to this
  /// limit only; 0 disables).
  Index track_matrix_limit = 200;
};

enum class Status { kFeasible, kWitness, kRadiusExceeded, kInconclusive };

const char* status_name(Status s);

enum class TraceAction { kStep, kDouble, kWitness };

struct TraceEntry {
  std::size_t iteration = 0;
  double radius = 0.0;
  double gap = 0.0;
  /// Eigenvalue (or oracle) estimate behind the action; NaN when unknown.
  double lambda = 0.0;
  TraceAction action = TraceAction::kStep;
};

struct Witness {
  /// b' in C(radius), and its certificate.
  Vector iterate;
  ConvexCertificate iterate_cert;
  geometry::Hyperplane hyperplane;
  double radius = 0.0;
  double gap = 0.0;
  double lambda = 0.0;
  /// Upper bound on max (b - b')^T y over C(radius) reported by the oracle.
  double support_bound = 0.0;
  geometry::WitnessRule rule = geometry::WitnessRule::kNoPivot;
};

struct SolveOutcome {
  Status status = Status::kInconclusive;
  std::size_t iterations = 0;
  RadiusSchedule schedule;
  std::vector<double> radius_history;
  std::vector<TraceEntry> trace;
  /// Final iterate b' and its gap to b.
  Vector iterate;
  double residual = 0.0;
  /// Certificate of the iterate (the answer when feasible).
  ConvexCertificate cert;
  /// X = sum alpha_i x_i x_i^T; set for feasible outcomes of homogeneous systems.
  std::optional<PsdCertificate> psd;
  /// Certificate with points rescaled towards b; reported separately.
  std::optional<ConvexCertificate> refined;
  /// Witness for kWitness, last witness seen for kRadiusExceeded.
  std::optional<Witness> witness;
  std::string reason;
  std::vector<std::string> warnings;
  /// Some A_k = 0 while b_k != 0; b is outside C(r) for every r.
  bool zero_component = false;

  /// The system the certificate and witness refer to (homogenized when the
  /// input had linear or constant terms).
  QuadraticSystem system;
  std::optional<chr::Homogenization> homogenization;
  /// Certificate mapped back to the original variables (weights alpha_i z_i^2,
  /// points x_i / z_i); only for homogenized feasible solves.
  std::optional<ConvexCertificate> original_cert;
};

using OracleFactory = std::function<std::unique_ptr<geometry::PivotOracle>(double radius)>;

struct StepSnapshot {
  std::size_t iteration = 0;
  double radius = 0.0;
  const Vector* iterate = nullptr;
  const ConvexCertificate* cert = nullptr;
  /// Null unless the dense iterate matrix is tracked.
  const DenseMatrix* matrix = nullptr;
};

struct SolveHooks {
  /// Start from this certificate instead of a single random point.
  std::optional<ConvexCertificate> initial;
  /// Replaces the eigenvalue oracle; the system is then used as given, without
  /// homogenization, and r0 must be supplied.
  OracleFactory oracle_factory;
  std::function<void(const StepSnapshot&)> on_step;
};

/// Triangle Algorithm for b in C(r) with radius doubling.
///
/// Starts at r0 (radius_lower_bound when absent) and doubles r
/// whenever the converged top eigenvalue proves that no strict pivot exists,
/// up to r_max (default 1024 r0). At r_max the loop continues with plain
/// pivots until none exists, so the reported witness gap is within a factor
/// two of the distance from b to C(r_max).
SolveOutcome solve_feasibility(const QuadraticSystem& sys, const SolveConfig& cfg,
                               std::optional<double> r0 = std::nullopt,
                               std::optional<double> r_max = std::nullopt,
                               const SolveHooks& hooks = {});

/// Re-derives the no-strict-pivot inequality
///   r^2 max(lambda_max(sum_k (b_k - b'_k) A_k), 0) < ||b||^2 - b^T b'
/// for a homogeneous system. Returns false at zero gap.
bool verify_witness(const QuadraticSystem& sys, double r, const Vector& b, const Vector& b_prime,
                    bool exact, double eig_tol = 1e-10);

}  // namespace trisdp::solver
