#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "trisdp/chr/certificate.hpp"
#include "trisdp/geometry/triangle.hpp"
#include "trisdp/solver/feasibility.hpp"

namespace trisdp::apps {

/// x^T A_k x + c_k^T x <= b_k for k = 1..m with every A_k PSD.
struct ConvexQpSystem {
  linalg::Index n = 0;
  std::vector<linalg::SymMatrix> quad;
  std::vector<linalg::Vector> lin;
  linalg::Vector rhs;

  linalg::Index m() const { return static_cast<linalg::Index>(quad.size()); }
  /// Shapes, finiteness, and A_k PSD within 1e-8 ||A_k||; throws otherwise.
  void validate() const;
  /// Reads the inequalities off a quadratic system; constants move to the
  /// right-hand side.
  static ConvexQpSystem from_system(const chr::QuadraticSystem& sys);
};

/// Slack form in z = (x, s): x^T A_k x + c_k^T x + s_k^2 = b_k.
chr::QuadraticSystem convexqp_instance(const ConvexQpSystem& qp);

/// Pivot oracle over conv{Q(z) : ||z|| <= r} for an inhomogeneous system: the
/// aggregate sum_k c_k q_k is maximized over the ball by trs_solve.
class TrsPivotOracle final : public geometry::PivotOracle {
 public:
  TrsPivotOracle(const chr::QuadraticSystem& sys, double radius, double tol = 1e-14);
  geometry::PivotAnswer maximize(const geometry::PivotQuery& query) override;

 private:
  const chr::QuadraticSystem& sys_;
  double radius_;
  double tol_;
  std::vector<linalg::DenseMatrix> dense_;
};

std::unique_ptr<geometry::PivotOracle> trs_pivot_oracle(const chr::QuadraticSystem& sys,
                                                        double radius, double tol = 1e-14);

struct ConvexQpResult {
  solver::SolveOutcome outcome;
  /// sum_i alpha_i x_i over the certificate; satisfies the inequalities
  /// within the residual by convexity.
  std::optional<linalg::Vector> x_bar;
  /// sum_i alpha_i (z_i, 1)(z_i, 1)^T.
  std::optional<chr::PsdCertificate> lifted_psd;
};

/// Solves the slack system with TRS pivots starting from
/// r0 = r_x + sqrt(sum_k max(0, b_k)).
ConvexQpResult solve_convex_qp(const ConvexQpSystem& qp, const solver::SolveConfig& cfg,
                               double r_x = 1.0, std::optional<double> r_max = std::nullopt);

}  // namespace trisdp::apps
