#include "trisdp/apps/trs.hpp"

#include <algorithm>
#include <cmath>

#include "trisdp/errors.hpp"

namespace trisdp::apps {

namespace {

constexpr double kHardCaseRel = 1e-10;
constexpr int kMaxRootIters = 200;

double objective(const DenseMatrix& a, const Vector& c, const Vector& z) {
  return z.dot(a * z) + c.dot(z);
}

}  // namespace

TrsSolution trs_solve(const SymMatrix& a, const Vector& c, double r, double tol) {
  return trs_solve(a.to_dense(), c, r, tol);
}

TrsSolution trs_solve(const DenseMatrix& a, const Vector& c, double r, double tol) {
  const Index n = a.rows();
  if (n < 1 || a.cols() != n) throw DimensionError("trs_solve: need a square matrix");
  if (c.size() != n) throw DimensionError("trs_solve: linear term length != order");
  if (!(r > 0.0)) throw std::invalid_argument("trs_solve: radius must be positive");

  const DenseMatrix b = -2.0 * a;
  const Vector g = -c;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(b);
  if (es.info() != Eigen::Success) throw std::runtime_error("trs_solve: eigensolver failed");
  const Vector& lam = es.eigenvalues();
  const DenseMatrix& q = es.eigenvectors();
  const Vector gam = q.transpose() * g;
  const double gnorm = g.norm();
  const double scale = std::max({std::abs(lam[0]), std::abs(lam[n - 1]), 1e-300});
  const double eig_tol = 1e-12 * scale;
  const double lmin = lam[0];

  TrsSolution sol;
  auto z_of = [&](double mu) {
    Vector y(n);
    for (Index i = 0; i < n; ++i) {
      const double d = lam[i] + mu;
      y[i] = d > 0.0 ? -gam[i] / d : 0.0;
    }
    return Vector(q * y);
  };
  auto finish = [&](Vector z, double mu, bool boundary) {
    sol.z = std::move(z);
    sol.mu = mu;
    sol.boundary = boundary;
    sol.value = objective(a, c, sol.z);
    return sol;
  };

  // Interior candidate: B PSD and the minimum-norm stationary point fits.
  if (lmin >= -eig_tol) {
    bool in_range = true;
    for (Index i = 0; i < n; ++i) {
      if (lam[i] <= eig_tol && std::abs(gam[i]) > kHardCaseRel * std::max(gnorm, 1e-300)) {
        in_range = false;
      }
    }
    if (in_range) {
      Vector y = Vector::Zero(n);
      for (Index i = 0; i < n; ++i) {
        if (lam[i] > eig_tol) y[i] = -gam[i] / lam[i];
      }
      Vector z = q * y;
      if (z.norm() <= r) return finish(std::move(z), 0.0, false);
    }
  }

  // Boundary solution with mu > max(0, -lmin).
  const double mu_lo = std::max(0.0, -lmin);
  double bottom_weight = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (lam[i] - lmin <= eig_tol) bottom_weight = std::max(bottom_weight, std::abs(gam[i]));
  }
  const bool hard =
      lmin <= eig_tol && (bottom_weight <= kHardCaseRel * gnorm || gnorm == 0.0);
  if (hard) {
    // Norm left when the bottom eigenspace is skipped.
    Vector y = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) {
      if (lam[i] - lmin > eig_tol) y[i] = -gam[i] / (lam[i] + mu_lo);
    }
    const double partial = y.norm();
    if (partial <= r) {
      const double tau = std::sqrt(std::max(0.0, r * r - partial * partial));
      y[0] = tau;
      sol.hard_case = true;
      return finish(q * y, mu_lo, true);
    }
  }

  auto norm_at = [&](double mu) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double d = lam[i] + mu;
      s += gam[i] * gam[i] / (d * d);
    }
    return std::sqrt(s);
  };
  double lo = mu_lo;
  double hi = mu_lo + gnorm / r + scale * 1e-12 + 1e-300;
  while (norm_at(hi) > r) hi = mu_lo + 2.0 * (hi - mu_lo);
  double mu = hi;
  int it = 0;
  for (; it < kMaxRootIters; ++it) {
    const double nz = norm_at(mu);
    const double psi = 1.0 / nz - 1.0 / r;
    if (std::abs(nz - r) <= tol * r) break;
    if (nz > r) {
      lo = mu;
    } else {
      hi = mu;
    }
    // Newton on psi(mu) = 1/||z|| - 1/r, which is nearly linear in mu.
    double dn = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double d = lam[i] + mu;
      dn -= gam[i] * gam[i] / (d * d * d);
    }
    dn /= nz;  // d||z||/dmu
    const double dpsi = -dn / (nz * nz);
    double next = dpsi != 0.0 ? mu - psi / dpsi : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) break;
    mu = next;
  }
  sol.root_iterations = it;
  Vector z = z_of(mu);
  const double nz = z.norm();
  if (!(std::abs(nz - r) <= 1e-9 * r)) {
    finish(z, mu, true);
    throw TrsError("trs_solve: secular equation did not converge", sol);
  }
  // Put the point exactly on the sphere.
  z *= r / nz;
  return finish(std::move(z), mu, true);
}

KktReport trs_kkt(const DenseMatrix& a, const Vector& c, double r, const TrsSolution& sol) {
  const Index n = a.rows();
  const DenseMatrix shifted = -2.0 * a + sol.mu * DenseMatrix::Identity(n, n);
  KktReport rep;
  rep.stationarity = (shifted * sol.z - c).norm();
  rep.complementarity = std::abs(sol.mu * (sol.z.norm() - r));
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(shifted, Eigen::EigenvaluesOnly);
  rep.min_eig = es.eigenvalues()[0];
  rep.feasibility = std::max(0.0, sol.z.norm() - r);
  return rep;
}

}  // namespace trisdp::apps
