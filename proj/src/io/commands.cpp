#include "trisdp/io/commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "trisdp/apps/binary_quadratic.hpp"
#include "trisdp/apps/convex_qp.hpp"
#include "trisdp/apps/maxcut.hpp"
#include "trisdp/io/checker.hpp"
#include "trisdp/io/graph_io.hpp"
#include "trisdp/io/instance_io.hpp"
#include "trisdp/io/result_io.hpp"
#include "trisdp/io/sdpa.hpp"
#include "trisdp/solver/optimization.hpp"

namespace trisdp::io {

namespace {

using solver::Status;

/// Flags shared by the solving subcommands.
struct Common {
  double eps = 1e-6;
  std::optional<double> r0;
  std::optional<double> rmax;
  std::size_t max_iters = 100000;
  std::uint64_t seed = 0;
  bool exact_eig = false;
  std::string out_path;
  std::string trace_path;

  solver::SolveConfig config() const {
    if (!(eps > 0.0)) throw CLI::ValidationError("--eps", "must be positive");
    if (max_iters < 1) throw CLI::ValidationError("--max-iters", "must be at least 1");
    solver::SolveConfig cfg;
    cfg.epsilon = eps;
    cfg.max_iters = max_iters;
    cfg.seed = seed;
    cfg.exact_eig = exact_eig;
    return cfg;
  }
};

void add_common(CLI::App* sub, Common& c, bool radii = true, bool seed = true) {
  sub->add_option("--eps", c.eps, "Target distance to b")->capture_default_str();
  if (radii) {
    sub->add_option("--r0", c.r0, "Initial radius (default: lower bound from the data)");
    sub->add_option("--rmax", c.rmax, "Largest radius tried");
  }
  sub->add_option("--max-iters", c.max_iters, "Iteration budget")->capture_default_str();
  if (seed) {
    sub->add_option("--seed", c.seed, "Seed for starting points and rounding")
        ->capture_default_str();
  }
  sub->add_flag("--exact-eig", c.exact_eig, "Confirm witnesses with a dense eigensolver");
  sub->add_option("--out", c.out_path, "Result file (default: standard output)");
  sub->add_option("--trace", c.trace_path, "Write the iteration trace as CSV");
}

int exit_for(Status s) {
  switch (s) {
    case Status::kFeasible:
      return kExitFeasible;
    case Status::kWitness:
      return kExitWitness;
    default:
      return kExitUndecided;
  }
}

const char* action_name(solver::TraceAction a) {
  switch (a) {
    case solver::TraceAction::kStep:
      return "step";
    case solver::TraceAction::kDouble:
      return "double";
    case solver::TraceAction::kWitness:
      return "witness";
  }
  return "step";
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError(path + ": cannot write file");
  f << text;
}

void write_trace(const std::string& path, const std::vector<solver::TraceEntry>& trace) {
  if (path.empty()) return;
  std::ostringstream s;
  s << "iteration,radius,gap,lambda,action\n";
  for (const auto& e : trace) {
    s << e.iteration << ',' << format_double(e.radius) << ',' << format_double(e.gap) << ','
      << format_double(e.lambda) << ',' << action_name(e.action) << "\n";
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError(path + ": cannot write file");
  f << s.str();
}

ConfigEcho echo(const Common& c, const solver::SolveOutcome& o) {
  ConfigEcho e;
  e.epsilon = c.eps;
  e.seed = c.seed;
  e.r0 = o.schedule.r0;
  e.r_max = o.schedule.r_max;
  e.max_iters = c.max_iters;
  return e;
}

void summarize(std::ostream& err, const std::string& cmd, const ResultFile& r, double seconds) {
  std::ostringstream s;
  s << cmd << ": " << solver::status_name(r.status) << " after " << r.iterations
    << " iterations, residual " << format_double(r.residual) << ", radius "
    << format_double(r.radius_history.back());
  if (r.radius_history.size() > 1) s << " (" << r.radius_history.size() - 1 << " doublings)";
  s << ", " << std::fixed << std::setprecision(2) << seconds << " s\n";
  if (!r.reason.empty()) s << "  reason: " << r.reason << "\n";
  for (const auto& w : r.warnings) s << "  warning: " << w << "\n";
  err << s.str();
}

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int finish(const Common& c, const std::string& cmd, const ResultFile& r,
           const std::vector<solver::TraceEntry>& trace, Clock::time_point t0, std::ostream& out,
           std::ostream& err) {
  write_text(c.out_path, serialize_result(r), out);
  write_trace(c.trace_path, trace);
  summarize(err, cmd, r, since(t0));
  return exit_for(r.status);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semidefinite and quadratic feasibility by the Triangle Algorithm", "trisdp"};
  app.require_subcommand(1);

  Common feas_c, opt_c, bin_c, cut_c, qp_c, bench_c;
  std::string feas_in, opt_in, bin_in, cut_in, qp_in, check_inst, check_res, check_out;
  double opt_r = 0.0, bin_alpha = 0.0, cut_r = 0.0, qp_rx = 1.0, check_tol = 1e-7;
  std::size_t cut_trials = 1000;
  linalg::Index bench_n = 0;
  double bench_density = 0.05;
  std::uint64_t bench_seed = 0;
  std::string bench_emit;

  auto* feas = app.add_subcommand("solve-feas", "Decide b in C(r) for a quadratic system");
  feas->add_option("instance", feas_in, "Instance file")->required();
  add_common(feas, feas_c);

  auto* opt = app.add_subcommand("solve-opt", "Maximize A0 . X over the relaxation at radius r");
  opt->add_option("instance", opt_in, "Instance file with an objective, or SDPA .dat-s")
      ->required();
  opt->add_option("--r", opt_r, "Radius")->required();
  add_common(opt, opt_c, false);

  auto* bin = app.add_subcommand("binary-feas", "Relaxation of x^T A x = alpha over {-1,1}^n");
  bin->add_option("instance", bin_in, "Instance file holding the matrix A as its only equation")
      ->required();
  bin->add_option("--alpha", bin_alpha, "Target value")->required();
  add_common(bin, bin_c);

  auto* cut = app.add_subcommand("maxcut", "MAX-CUT relaxation and hyperplane rounding");
  cut->add_option("graph", cut_in, "Edge list")->required();
  cut->add_option("--trials", cut_trials, "Rounding trials")->capture_default_str();
  cut->add_option("--r", cut_r, "Radius (default 1.1 sqrt(n))");
  add_common(cut, cut_c, false);

  auto* qp = app.add_subcommand("convex-qp", "Convex quadratic inequalities via trust regions");
  qp->add_option("instance", qp_in, "Instance file; each equation is read as q_k(x) <= b_k")
      ->required();
  qp->add_option("--rx", qp_rx, "Bound on ||x|| used for the initial radius")
      ->capture_default_str();
  add_common(qp, qp_c);

  auto* check = app.add_subcommand("check-cert", "Independently verify a result file");
  check->add_option("instance", check_inst, "Instance the result was computed for")->required();
  check->add_option("result", check_res, "Result file")->required();
  check->add_option("--tol", check_tol, "Relative tolerance")->capture_default_str();
  check->add_option("--out", check_out, "Check report (default: standard output)");

  auto* bench = app.add_subcommand("bench", "Generated benchmark instances");
  bench->require_subcommand(1);
  auto* bench_bin = bench->add_subcommand("binary-feas", "Random planted binary instance");
  bench_bin->add_option("--n", bench_n, "Order")->required();
  bench_bin->add_option("--density", bench_density, "Off-diagonal density")
      ->capture_default_str();
  bench_bin->add_option("--seed", bench_seed, "Generator and solver seed")->capture_default_str();
  bench_bin->add_option("--emit-instance", bench_emit, "Also write the generated system");
  bench_c.eps = 1e-3;
  add_common(bench_bin, bench_c, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  const auto t0 = Clock::now();
  try {
    if (*feas) {
      auto inst = parse_instance(feas_in);
      auto o = solver::solve_feasibility(inst.system, feas_c.config(), feas_c.r0, feas_c.rmax);
      auto r = result_from_outcome(o, "solve-feas", echo(feas_c, o));
      r.problem["kind"] = "system";
      return finish(feas_c, "solve-feas", r, o.trace, t0, out, err);
    }
    if (*opt) {
      chr::QuadraticSystem sys;
      linalg::SymMatrix a0;
      if (ends_with(opt_in, ".dat-s")) {
        auto sd = parse_sdpa_sparse(opt_in);
        sys = std::move(sd.system);
        a0 = std::move(sd.objective);
      } else {
        auto inst = parse_instance(opt_in);
        if (!inst.objective) throw DataError(opt_in + ": instance has no objective records");
        sys = std::move(inst.system);
        a0 = std::move(*inst.objective);
      }
      if (!(opt_r > 0.0)) throw CLI::ValidationError("--r", "must be positive");
      auto res = solver::solve_optimization(sys, a0, opt_r, opt_c.config());
      Common c = opt_c;
      auto r = result_from_outcome(res.outcome, "solve-opt", echo(c, res.outcome));
      r.status = res.status;
      if (!res.reason.empty()) r.reason = res.reason;
      if (res.status == Status::kFeasible) {
        r.problem["kind"] = "optimization";
        r.problem["target"] = res.outcome.system.rhs[0];
        r.extra["value"] = res.value;
        r.extra["upper"] = res.upper;
        r.extra["capped"] = res.capped;
        r.extra["rounds"] = res.rounds.size();
      } else {
        r.problem["kind"] = "system";
      }
      r.iterations = res.iterations;
      return finish(opt_c, "solve-opt", r, res.outcome.trace, t0, out, err);
    }
    if (*bin) {
      auto inst = parse_instance(bin_in);
      if (inst.system.m() != 1) throw DataError(bin_in + ": expected exactly one equation (A)");
      auto sys = apps::binary_feas_instance(inst.system.quad[0], bin_alpha);
      const double rmax =
          bin_c.rmax.value_or(2.0 * std::sqrt(static_cast<double>(inst.system.n)));
      auto o = solver::solve_feasibility(sys, bin_c.config(), bin_c.r0, rmax);
      auto r = result_from_outcome(o, "binary-feas", echo(bin_c, o));
      r.problem["kind"] = "binary";
      r.problem["alpha"] = bin_alpha;
      return finish(bin_c, "binary-feas", r, o.trace, t0, out, err);
    }
    if (*cut) {
      auto g = parse_graph(cut_in);
      auto res = apps::maxcut_solve(g, cut_c.config(), cut_trials, cut_r);
      auto r = result_from_outcome(res.relaxation.outcome, "maxcut",
                                   echo(cut_c, res.relaxation.outcome));
      r.iterations = res.relaxation.iterations;
      r.problem["kind"] = "maxcut";
      r.problem["target"] = res.relaxation.outcome.system.rhs[0];
      r.extra["sdp_value"] = res.relaxation.value;
      r.extra["upper"] = res.relaxation.upper;
      r.extra["cut"] = vector_json(res.rounding.best);
      r.extra["cut_value"] = res.rounding.best_value;
      r.extra["best_trial"] = res.rounding.best_trial;
      r.extra["mean_cut"] = res.rounding.mean();
      const int code = finish(cut_c, "maxcut", r, res.relaxation.outcome.trace, t0, out, err);
      err << "  relaxation value " << format_double(res.relaxation.value) << ", best cut "
          << format_double(res.rounding.best_value) << " (trial " << res.rounding.best_trial
          << "), mean cut " << format_double(res.rounding.mean()) << "\n";
      return code;
    }
    if (*qp) {
      auto inst = parse_instance(qp_in);
      auto cq = apps::ConvexQpSystem::from_system(inst.system);
      auto res = apps::solve_convex_qp(cq, qp_c.config(), qp_rx, qp_c.rmax);
      auto r = result_from_outcome(res.outcome, "convex-qp", echo(qp_c, res.outcome));
      r.problem["kind"] = "convex_qp";
      if (res.x_bar) r.extra["x"] = vector_json(*res.x_bar);
      return finish(qp_c, "convex-qp", r, res.outcome.trace, t0, out, err);
    }
    if (*check) {
      const auto report = check_certificate(check_inst, check_res, check_tol);
      Json j = Json::object();
      j["format"] = "trisdp-check";
      j["version"] = 1;
      j["passed"] = report.passed();
      Json items = Json::array();
      for (const auto& i : report.items) {
        Json item = Json::object();
        item["name"] = i.name;
        item["passed"] = i.passed;
        item["detail"] = i.detail;
        items.push_back(std::move(item));
      }
      j["checks"] = std::move(items);
      write_text(check_out, dump_json(j), out);
      err << report.summary();
      const auto failed = report.failures();
      err << "check-cert: " << (failed.empty() ? "pass" : "FAIL") << " ("
          << report.items.size() - failed.size() << "/" << report.items.size()
          << " checks passed)\n";
      return failed.empty() ? kExitFeasible : kExitWitness;
    }
    if (*bench_bin) {
      if (bench_n < 2) throw CLI::ValidationError("--n", "must be at least 2");
      if (!(bench_density > 0.0 && bench_density <= 1.0)) {
        throw CLI::ValidationError("--density", "must be in (0, 1]");
      }
      bench_c.seed = bench_seed;
      auto bi = apps::random_binary_instance(bench_n, bench_density, bench_seed);
      auto sys = apps::binary_feas_instance(bi.a, bi.alpha);
      if (!bench_emit.empty()) write_text(bench_emit, serialize_instance(sys), out);
      const double rmax = bench_c.rmax.value_or(2.0 * std::sqrt(static_cast<double>(bench_n)));
      auto o = solver::solve_feasibility(sys, bench_c.config(), bench_c.r0, rmax);
      auto r = result_from_outcome(o, "bench binary-feas", echo(bench_c, o));
      r.problem["kind"] = "system";
      Json b = Json::object();
      b["n"] = bench_n;
      b["density"] = bench_density;
      b["seed"] = bench_seed;
      b["alpha"] = bi.alpha;
      r.extra["bench"] = std::move(b);
      return finish(bench_c, "bench binary-feas", r, o.trace, t0, out, err);
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // DimensionError derives from invalid_argument but describes the data.
    if (dynamic_cast<const DimensionError*>(&e)) {
      err << "data error: " << e.what() << "\n";
      return kExitData;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NotPsdError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DegenerateError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUndecided;
  }
  return kExitUsage;
}

}  // namespace trisdp::io
