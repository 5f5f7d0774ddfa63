#include "trisdp/apps/maxcut.hpp"

#include <cmath>
#include <random>
#include <set>

#include "trisdp/errors.hpp"
#include "trisdp/linalg/rank_one.hpp"

namespace trisdp::apps {

using linalg::DenseMatrix;
using linalg::Index;
using linalg::Vector;

void Graph::validate() const {
  if (n < 1) throw DataError("graph has no vertices");
  std::set<std::pair<Index, Index>> seen;
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw DataError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                      ") out of range");
    }
    if (e.u == e.v) throw DataError("self-loop at vertex " + std::to_string(e.u));
    if (!std::isfinite(e.w)) throw DataError("edge weight is not finite");
    const auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second) {
      throw DataError("duplicate edge (" + std::to_string(key.first) + ", " +
                      std::to_string(key.second) + ")");
    }
  }
}

double maxcut_value(const Graph& g, const Vector& x) {
  if (x.size() != g.n) throw DimensionError("maxcut_value: assignment length != n");
  double s = 0.0;
  for (const auto& e : g.edges) s += e.w * (1.0 - x[e.u] * x[e.v]) / 2.0;
  return s;
}

linalg::SymMatrix maxcut_objective(const Graph& g) {
  Vector diag = Vector::Zero(g.n);
  std::vector<linalg::Triplet> trips;
  for (const auto& e : g.edges) {
    diag[e.u] += e.w;
    diag[e.v] += e.w;
    trips.push_back({std::min(e.u, e.v), std::max(e.u, e.v), -0.25 * e.w});
  }
  for (Index i = 0; i < g.n; ++i) {
    if (diag[i] != 0.0) trips.push_back({i, i, 0.25 * diag[i]});
  }
  return linalg::SymMatrix::from_triplets(g.n, std::move(trips));
}

chr::QuadraticSystem maxcut_constraints(const Graph& g) {
  std::vector<linalg::SymMatrix> quad;
  for (Index i = 0; i < g.n; ++i) quad.push_back(linalg::SymMatrix::from_triplets(g.n, {{i, i, 1.0}}));
  return chr::QuadraticSystem::homogeneous_system(std::move(quad), Vector::Ones(g.n));
}

double GwResult::mean() const {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

DenseMatrix unit_diagonal(const DenseMatrix& x) {
  Vector d = x.diagonal();
  for (Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) throw DegenerateError("unit_diagonal: non-positive diagonal entry");
    d[i] = 1.0 / std::sqrt(d[i]);
  }
  return d.asDiagonal() * x * d.asDiagonal();
}

GwResult gw_round(const DenseMatrix& x, const Graph& g, std::size_t trials, std::uint64_t seed) {
  if (x.rows() != g.n || x.cols() != g.n) throw DimensionError("gw_round: matrix order != n");
  if (trials < 1) throw std::invalid_argument("gw_round: need at least one trial");
  for (Index i = 0; i < g.n; ++i) {
    if (std::abs(x(i, i) - 1.0) > 1e-6) {
      throw DataError("gw_round: diagonal entry " + std::to_string(i) + " is not 1");
    }
  }
  const DenseMatrix v = linalg::pivoted_cholesky(x);
  const Index s = v.cols();

  GwResult res;
  res.values.reserve(trials);
  std::normal_distribution<double> normal;
  Vector p(s), assign(g.n);
  for (std::size_t t = 0; t < trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    std::mt19937_64 rng(seq);
    for (Index j = 0; j < s; ++j) p[j] = normal(rng);
    const Vector proj = v * p;
    for (Index i = 0; i < g.n; ++i) assign[i] = proj[i] >= 0.0 ? 1.0 : -1.0;
    const double val = maxcut_value(g, assign);
    res.values.push_back(val);
    if (t == 0 || val > res.best_value) {
      res.best_value = val;
      res.best = assign;
      res.best_trial = t;
    }
  }
  return res;
}

MaxcutResult maxcut_solve(const Graph& g, const solver::SolveConfig& cfg, std::size_t trials,
                          double r) {
  g.validate();
  if (r <= 0.0) r = 1.1 * std::sqrt(static_cast<double>(g.n));
  MaxcutResult out;
  out.relaxation = solver::solve_optimization(maxcut_constraints(g), maxcut_objective(g), r, cfg);
  if (out.relaxation.status != solver::Status::kFeasible || !out.relaxation.outcome.psd) {
    throw DegenerateError("maxcut_solve: relaxation was not solved");
  }
  out.gram = unit_diagonal(out.relaxation.outcome.psd->x);
  out.rounding = gw_round(out.gram, g, trials, cfg.seed);
  return out;
}

}  // namespace trisdp::apps
