#include "trisdp/io/checker.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "trisdp/apps/binary_quadratic.hpp"
#include "trisdp/apps/convex_qp.hpp"
#include "trisdp/apps/trs.hpp"
#include "trisdp/io/graph_io.hpp"
#include "trisdp/io/instance_io.hpp"
#include "trisdp/io/sdpa.hpp"
#include "trisdp/linalg/power_iteration.hpp"

namespace trisdp::io {

namespace {

using linalg::DenseMatrix;
using linalg::Index;
using linalg::Vector;

constexpr Index kDenseLimit = 200;

std::string num(double v) { return format_double(v); }

class Checks {
 public:
  explicit Checks(CheckReport& report) : report_(report) {}
  void add(const std::string& name, bool ok, const std::string& detail) {
    report_.items.push_back({name, ok, detail});
  }

 private:
  CheckReport& report_;
};

chr::QuadraticSystem augmented(const chr::QuadraticSystem& input, linalg::SymMatrix a0,
                               double target) {
  chr::QuadraticSystem sys = input;
  if (!sys.homogeneous()) {
    const auto h = chr::homogenize(input);
    sys = h.system;
    if (h.added_z) {
      std::vector<linalg::Triplet> t(a0.entries().begin(), a0.entries().end());
      a0 = linalg::SymMatrix::from_triplets(sys.n, std::move(t));
    }
  }
  chr::QuadraticSystem aug;
  aug.n = sys.n;
  aug.quad.push_back(a0);
  for (const auto& a : sys.quad) aug.quad.push_back(a);
  aug.rhs.resize(sys.m() + 1);
  aug.rhs[0] = target;
  aug.rhs.tail(sys.m()) = sys.rhs;
  return aug;
}

double problem_real(const ResultFile& r, const char* key) {
  if (!r.problem.contains(key) || !r.problem[key].is_number()) {
    throw DataError(std::string("result problem record lacks '") + key + "'");
  }
  return r.problem[key].get<double>();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Upper bound on max (c^T q(x)) over ||x|| <= r, computed without the solver.
double support_upper(const chr::QuadraticSystem& sys, const Vector& c, double r) {
  const Index n = sys.n;
  if (sys.homogeneous()) {
    if (n <= kDenseLimit) {
      DenseMatrix m = DenseMatrix::Zero(n, n);
      for (Index k = 0; k < sys.m(); ++k) {
        for (const auto& t : sys.quad[static_cast<std::size_t>(k)].entries()) {
          m(t.row, t.col) += c[k] * t.value;
          if (t.row != t.col) m(t.col, t.row) += c[k] * t.value;
        }
      }
      Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m, Eigen::EigenvaluesOnly);
      const double top = es.eigenvalues()[n - 1];
      const double norm = std::max(std::abs(top), std::abs(es.eigenvalues()[0]));
      return r * r * std::max(top + 1e-13 * norm, 0.0);
    }
    linalg::PowerOptions po;
    po.tol = 1e-10;
    po.max_iters = 200000;
    double shift = 0.0;
    for (Index k = 0; k < sys.m(); ++k) {
      shift += std::abs(c[k]) * sys.quad[static_cast<std::size_t>(k)].gershgorin_bound();
    }
    po.shift = shift;
    auto apply = [&](const Vector& in, Vector& out) {
      out.setZero();
      for (Index k = 0; k < sys.m(); ++k) {
        if (c[k] != 0.0) linalg::matvec_add(sys.quad[static_cast<std::size_t>(k)], in, c[k], out);
      }
    };
    linalg::EigPair e;
    try {
      e = linalg::max_eig(apply, n, po);
    } catch (const linalg::ConvergenceError& err) {
      e = err.best();
    }
    return r * r * std::max(e.lambda + e.residual_norm, 0.0);
  }
  // Linear terms: a trust-region problem over the ball.
  DenseMatrix m = DenseMatrix::Zero(n, n);
  Vector g = Vector::Zero(n);
  double d = 0.0;
  for (Index k = 0; k < sys.m(); ++k) {
    for (const auto& t : sys.quad[static_cast<std::size_t>(k)].entries()) {
      m(t.row, t.col) += c[k] * t.value;
      if (t.row != t.col) m(t.col, t.row) += c[k] * t.value;
    }
    if (sys.lin) g += c[k] * (*sys.lin)[static_cast<std::size_t>(k)];
    if (sys.constant) d += c[k] * (*sys.constant)[k];
  }
  const auto sol = apps::trs_solve(m, g, r);
  return sol.value + d + 1e-12 * (1.0 + std::abs(sol.value));
}

void check_cert(Checks& ck, const std::string& prefix, const chr::QuadraticSystem& sys,
                const chr::ConvexCertificate& cert, const Vector& target, double allowed,
                std::optional<double> claimed_residual, double radius_cap, bool check_norms,
                double tol, Vector* image_out) {
  if (cert.terms.empty()) {
    ck.add(prefix + ".terms", false, "certificate has no terms");
    return;
  }
  bool dims = true;
  for (const auto& t : cert.terms) dims = dims && t.point.size() == sys.n;
  ck.add(prefix + ".dimensions", dims, dims ? "" : "point length differs from the system order");
  if (!dims) return;

  double min_w = INFINITY, sum = 0.0;
  bool finite = true;
  for (const auto& t : cert.terms) {
    min_w = std::min(min_w, t.weight);
    sum += t.weight;
    finite = finite && std::isfinite(t.weight) && t.point.allFinite();
  }
  ck.add(prefix + ".weights", finite && min_w >= 0.0, "smallest weight " + num(min_w));
  ck.add(prefix + ".weight_sum", std::abs(sum - 1.0) <= tol * cert.terms.size(),
         "sum " + num(sum));
  if (check_norms) {
    const double norm = cert.max_point_norm();
    ck.add(prefix + ".norms", norm <= cert.radius * (1.0 + tol),
           "largest norm " + num(norm) + " vs radius " + num(cert.radius));
    ck.add(prefix + ".radius", cert.radius <= radius_cap * (1.0 + tol),
           "radius " + num(cert.radius) + " vs largest radius used " + num(radius_cap));
  }

  Vector image = Vector::Zero(sys.m());
  double scale = 1.0 + target.norm();
  for (const auto& t : cert.terms) {
    const Vector q = chr::eval_Q(sys, t.point);
    image += t.weight * q;
    scale += t.weight * q.norm();
  }
  const double res = (image - target).norm();
  ck.add(prefix + ".image", res <= allowed + tol * scale,
         "||image - target|| = " + num(res) + ", allowed " + num(allowed));
  if (claimed_residual) {
    ck.add(prefix + ".residual", std::abs(res - *claimed_residual) <= tol * scale,
           "recorded " + num(*claimed_residual) + ", recomputed " + num(res));
  }
  if (image_out) *image_out = image;

  if (!sys.homogeneous()) return;
  DenseMatrix x = DenseMatrix::Zero(sys.n, sys.n);
  for (const auto& t : cert.terms) x.noalias() += t.weight * t.point * t.point.transpose();
  const Vector ax = chr::apply_A(sys, x);
  const double drift = (ax - image).norm();
  ck.add(prefix + ".psd_image", drift <= tol * scale, "||A(X) - image|| = " + num(drift));
  const double tr = x.trace();
  ck.add(prefix + ".psd_trace", tr <= cert.radius * cert.radius * (1.0 + tol),
         "Tr(X) = " + num(tr) + " vs r^2 = " + num(cert.radius * cert.radius));
  if (sys.n <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(x, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()[0];
    ck.add(prefix + ".psd_eigen", lmin >= -tol * std::max(1.0, tr),
           "smallest eigenvalue " + num(lmin));
  }
}

}  // namespace

bool CheckReport::passed() const {
  if (items.empty()) return false;
  for (const auto& i : items) {
    if (!i.passed) return false;
  }
  return true;
}

std::vector<std::string> CheckReport::failures() const {
  std::vector<std::string> out;
  for (const auto& i : items) {
    if (!i.passed) out.push_back(i.name);
  }
  return out;
}

std::string CheckReport::summary() const {
  std::ostringstream out;
  for (const auto& i : items) {
    out << (i.passed ? "ok   " : "FAIL ") << i.name;
    if (!i.detail.empty()) out << "  (" << i.detail << ")";
    out << "\n";
  }
  return out.str();
}

CheckedProblem rebuild_problem(const std::string& path, const ResultFile& r) {
  if (!r.problem.contains("kind") || !r.problem["kind"].is_string()) {
    throw DataError("result has no problem kind");
  }
  const std::string kind = r.problem["kind"].get<std::string>();
  CheckedProblem p;
  if (kind == "system") {
    const chr::QuadraticSystem sys =
        ends_with(path, ".dat-s") ? parse_sdpa_sparse(path).system : parse_instance(path).system;
    p.system = sys.homogeneous() ? sys : chr::homogenize(sys).system;
    if (!sys.homogeneous()) p.original = sys;
  } else if (kind == "binary") {
    auto inst = parse_instance(path);
    if (inst.system.m() != 1) throw DataError("binary instance must hold one matrix");
    p.system = apps::binary_feas_instance(inst.system.quad[0], problem_real(r, "alpha"));
  } else if (kind == "optimization") {
    chr::QuadraticSystem sys;
    linalg::SymMatrix a0;
    if (ends_with(path, ".dat-s")) {
      auto sd = parse_sdpa_sparse(path);
      sys = sd.system;
      a0 = sd.objective;
    } else {
      auto inst = parse_instance(path);
      if (!inst.objective) throw DataError(path + ": instance has no objective");
      sys = inst.system;
      a0 = *inst.objective;
    }
    p.system = augmented(sys, a0, problem_real(r, "target"));
  } else if (kind == "maxcut") {
    p.graph = parse_graph(path);
    p.system = augmented(apps::maxcut_constraints(*p.graph), apps::maxcut_objective(*p.graph),
                         problem_real(r, "target"));
  } else if (kind == "convex_qp") {
    auto inst = parse_instance(path);
    p.system = apps::convexqp_instance(apps::ConvexQpSystem::from_system(inst.system));
  } else {
    throw DataError("unknown problem kind '" + kind + "'");
  }
  return p;
}

CheckReport check_result(const CheckedProblem& problem, const ResultFile& r, double tol) {
  CheckReport report;
  Checks ck(report);
  const auto& sys = problem.system;
  const Vector& b = sys.rhs;

  bool fields = !r.radius_history.empty();
  if (r.status == solver::Status::kFeasible) fields = fields && r.certificate.has_value();
  if (r.status == solver::Status::kWitness) fields = fields && r.witness.has_value();
  fields = fields && (r.certificate || r.witness);
  ck.add("result.fields", fields,
         std::string("status ") + solver::status_name(r.status) +
             (r.certificate ? ", certificate" : "") + (r.witness ? ", witness" : ""));
  if (!fields) return report;
  double radius_cap = 0.0;
  for (double x : r.radius_history) radius_cap = std::max(radius_cap, x);

  if (r.certificate) {
    // Only a feasible claim promises the image is within epsilon of b.
    const double allowed =
        r.status == solver::Status::kFeasible ? r.config.epsilon : INFINITY;
    check_cert(ck, "certificate", sys, *r.certificate, b, allowed, r.residual, radius_cap, true,
               tol, nullptr);
  }
  if (r.solution) {
    if (!problem.original) {
      ck.add("solution.system", false, "solution given for a homogeneous problem");
    } else {
      check_cert(ck, "solution", *problem.original, *r.solution, problem.original->rhs,
                 r.config.epsilon, std::nullopt, INFINITY, false, tol, nullptr);
    }
  }

  if (r.witness) {
    const auto& w = *r.witness;
    const bool dims = w.iterate.size() == b.size() && w.normal.size() == b.size();
    ck.add("witness.dimensions", dims, dims ? "" : "vector length differs from m");
    if (!dims) return report;
    const double scale = 1.0 + b.squaredNorm() + w.iterate.squaredNorm();
    const double gap = (b - w.iterate).norm();
    ck.add("witness.gap", std::abs(gap - w.gap) <= tol * (1.0 + gap),
           "recorded " + num(w.gap) + ", recomputed " + num(gap));
    const Vector normal = w.iterate - b;
    const double offset = 0.5 * (w.iterate.squaredNorm() - b.squaredNorm());
    const bool plane = (w.normal - normal).norm() <= tol * (1.0 + normal.norm()) &&
                       std::abs(w.offset - offset) <= tol * scale;
    ck.add("witness.hyperplane", plane, "normal and offset of the bisector of b and b'");
    const double side = w.normal.dot(b) - w.offset;
    ck.add("witness.target_side", side < 0.0, "normal.b - offset = " + num(side));
    ck.add("witness.radius", w.radius <= radius_cap * (1.0 + tol) && w.radius > 0.0,
           "radius " + num(w.radius));
    if (w.iterate_cert) {
      check_cert(ck, "witness.iterate", sys, *w.iterate_cert, w.iterate, 0.0, std::nullopt,
                 w.radius, true, tol, nullptr);
    }
    const Vector c = b - w.iterate;
    const double top = support_upper(sys, c, w.radius);
    const double strict = b.squaredNorm() - b.dot(w.iterate);
    ck.add("witness.no_strict_pivot", top < strict,
           "max over C(r) " + num(top) + " vs " + num(strict));
    if (w.rule == "no_pivot") {
      const double plain = 0.5 * (b.squaredNorm() - w.iterate.squaredNorm());
      ck.add("witness.separates", top < plain,
             "max over C(r) " + num(top) + " vs " + num(plain));
    }
  }

  if (problem.graph && r.extra.contains("cut")) {
    bool ok = r.extra["cut"].is_array() &&
              static_cast<Index>(r.extra["cut"].size()) == problem.graph->n &&
              r.extra.contains("cut_value");
    std::string detail = "cut vector malformed";
    if (ok) {
      Vector x = vector_from_json(r.extra["cut"], "extra.cut", "<result>");
      for (Index i = 0; i < x.size(); ++i) ok = ok && (x[i] == 1.0 || x[i] == -1.0);
      const double v = apps::maxcut_value(*problem.graph, x);
      const double claimed = r.extra["cut_value"].get<double>();
      ok = ok && std::abs(v - claimed) <= tol * (1.0 + std::abs(v));
      detail = "recorded " + num(claimed) + ", recomputed " + num(v);
    }
    ck.add("cut.value", ok, detail);
  }
  return report;
}

CheckReport check_certificate(const std::string& instance_path, const std::string& result_path,
                              double tol) {
  const ResultFile r = parse_result(result_path);
  return check_result(rebuild_problem(instance_path, r), r, tol);
}

}  // namespace trisdp::io
