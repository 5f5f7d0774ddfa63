#include "trisdp/linalg/power_iteration.hpp"

#include <cmath>
#include <random>

#include "trisdp/errors.hpp"

namespace trisdp::linalg {

Vector random_unit_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(n);
  double norm = 0.0;
  while (norm == 0.0) {
    for (Index i = 0; i < n; ++i) v[i] = normal(rng);
    norm = v.norm();
  }
  return v / norm;
}

EigPair max_eig(const LinearOperator& apply, Index n, const PowerOptions& options) {
  if (n < 1) throw DimensionError("max_eig: operator order must be positive");
  if (!(options.tol > 0.0)) throw std::invalid_argument("max_eig: tol must be positive");
  const std::size_t max_iters =
      options.max_iters ? options.max_iters : static_cast<std::size_t>(10 * n + 1000);
  const double shift = std::max(0.0, options.shift);

  Vector v;
  if (options.start && options.start->size() == n && options.start->norm() > 0.0) {
    v = options.start->normalized();
  } else {
    v = random_unit_vector(n, options.seed);
  }

  Vector w(n);
  EigPair best;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    w.setZero();
    apply(v, w);
    const double rho = v.dot(w);
    const double residual = (w - rho * v).norm();

    best.lambda = rho;
    best.vector = v;
    best.residual_norm = residual;
    best.iterations = it;

    if (options.early_stop && options.early_stop(rho, v)) {
      best.early_stopped = true;
      return best;
    }
    if (residual <= options.tol * std::max(1.0, std::abs(rho))) {
      best.converged = true;
      return best;
    }

    w += shift * v;
    const double norm = w.norm();
    if (norm == 0.0) {
      // v lies in the eigenspace of -shift; a residual this small would have
      // converged above, so restart from a fresh direction.
      v = random_unit_vector(n, options.seed + it);
      continue;
    }
    v = w / norm;
  }
  throw ConvergenceError("power iteration did not converge in " +
                             std::to_string(max_iters) + " steps",
                         best);
}

EigPair max_eig(const SymMatrix& a, PowerOptions options) {
  if (options.shift == 0.0) options.shift = a.gershgorin_bound();
  return max_eig([&a](const Vector& in, Vector& out) { matvec_add(a, in, 1.0, out); },
                 a.order(), options);
}

double spectral_norm(const SymMatrix& x, double tol, std::uint64_t seed) {
  PowerOptions opts;
  opts.tol = tol;
  opts.seed = seed;
  opts.shift = x.gershgorin_bound();
  const SymMatrix neg = x.scaled(-1.0);
  const double top = max_eig(x, opts).lambda;
  const double bottom = max_eig(neg, opts).lambda;
  return std::max(std::abs(top), std::abs(bottom));
}

EigPair dense_max_eig(const DenseMatrix& a) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw DimensionError("dense_max_eig: need a non-empty square matrix");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  const Index top = a.rows() - 1;
  EigPair out;
  out.lambda = es.eigenvalues()[top];
  out.vector = es.eigenvectors().col(top);
  out.residual_norm = (a * out.vector - out.lambda * out.vector).norm();
  out.converged = true;
  return out;
}

}  // namespace trisdp::linalg
