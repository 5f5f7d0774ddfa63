#pragma once

#include <string>
#include <vector>

#include "trisdp/chr/quadratic_system.hpp"
#include "trisdp/linalg/rank_one.hpp"

namespace trisdp::chr {

struct CertTerm {
  double weight = 0.0;
  Vector point;
};

/// Convex combination sum_i weight_i Q(point_i) of points of norm at most
/// `radius`; it proves that the combination lies in C(radius).
struct ConvexCertificate {
  std::vector<CertTerm> terms;
  double radius = 0.0;

  /// sum_i weight_i Q(point_i).
  Vector image(const QuadraticSystem& sys) const;
  double weight_sum() const;
  double max_point_norm() const;
  /// Throws DataError naming the first violated invariant.
  void validate(double tol = 1e-10) const;
};

/// PSD matrix X with Tr(X) <= trace_bound.
struct PsdCertificate {
  DenseMatrix x;
  double trace_bound = 0.0;

  /// Throws NotPsdError / DataError when an invariant fails.
  void validate(double tol = 1e-8) const;
};

/// X = sum_i alpha_i x_i x_i^T, trace bound radius^2.
PsdCertificate cert_to_psd(const ConvexCertificate& cert);

/// Rank-one decomposition of X rewritten as a certificate of radius
/// sqrt(Tr X).
ConvexCertificate psd_to_cert(const PsdCertificate& psd,
                              linalg::DecompMode mode = linalg::DecompMode::kSpectral);

/// Rescales each point x_i to sqrt(g_i) x_i with g_i = b^T Q(x_i) / ||Q(x_i)||^2,
/// the least-squares multiple of Q(x_i) closest to b. Terms with g_i <= 0 or
/// Q(x_i) = 0 are kept as they are; weights are not changed. The radius grows
/// if a rescaled point leaves the original ball.
ConvexCertificate refine_cert(const ConvexCertificate& cert, const QuadraticSystem& sys,
                              const Vector& b);

struct PruneResult {
  ConvexCertificate cert;
  /// Empty on success; set when the elimination hit a rank problem and the
  /// input was returned unchanged.
  std::string warning;
};

/// Reduces a certificate to at most m + 1 terms with the same image.
///
/// Identical points are merged first. While more than m + 1 terms remain, an
/// affine dependency among the lifted images (Q(x_i), 1) is used to drive one
/// weight to zero.
PruneResult caratheodory_prune(const ConvexCertificate& cert, const QuadraticSystem& sys);

}  // namespace trisdp::chr
