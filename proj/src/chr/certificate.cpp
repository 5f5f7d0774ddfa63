#include "trisdp/chr/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trisdp/errors.hpp"

namespace trisdp::chr {

Vector ConvexCertificate::image(const QuadraticSystem& sys) const {
  Vector out = Vector::Zero(sys.m());
  for (const auto& t : terms) out += t.weight * eval_Q(sys, t.point);
  return out;
}

double ConvexCertificate::weight_sum() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.weight;
  return s;
}

double ConvexCertificate::max_point_norm() const {
  double r = 0.0;
  for (const auto& t : terms) r = std::max(r, t.point.norm());
  return r;
}

void ConvexCertificate::validate(double tol) const {
  if (terms.empty()) throw DataError("certificate has no terms");
  for (const auto& t : terms) {
    if (!(t.weight >= 0.0)) throw DataError("certificate weight is negative");
    if (t.point.size() != terms.front().point.size()) {
      throw DimensionError("certificate points have different lengths");
    }
  }
  if (std::abs(weight_sum() - 1.0) > tol) throw DataError("certificate weights do not sum to 1");
  if (max_point_norm() > radius * (1.0 + tol)) {
    throw DataError("certificate point lies outside the radius");
  }
}

void PsdCertificate::validate(double tol) const {
  if (x.rows() != x.cols()) throw DimensionError("PSD certificate matrix is not square");
  const double lmin = linalg::min_eigenvalue(x);
  const double norm = x.cwiseAbs().maxCoeff() * static_cast<double>(x.rows());
  if (lmin < -tol * std::max(norm, 1e-300)) {
    throw NotPsdError("PSD certificate has eigenvalue " + std::to_string(lmin));
  }
  if (x.trace() > trace_bound * (1.0 + 1e-10)) {
    throw DataError("PSD certificate trace exceeds its bound");
  }
}

PsdCertificate cert_to_psd(const ConvexCertificate& cert) {
  if (cert.terms.empty()) throw DataError("cert_to_psd: empty certificate");
  const Index n = cert.terms.front().point.size();
  PsdCertificate out;
  out.x = DenseMatrix::Zero(n, n);
  for (const auto& t : cert.terms) {
    out.x.selfadjointView<Eigen::Lower>().rankUpdate(t.point, t.weight);
  }
  out.x.triangularView<Eigen::StrictlyUpper>() = out.x.transpose();
  out.trace_bound = cert.radius * cert.radius;
  return out;
}

ConvexCertificate psd_to_cert(const PsdCertificate& psd, linalg::DecompMode mode) {
  const auto decomp = linalg::psd_rank_one_decomp(psd.x, mode);
  ConvexCertificate out;
  out.radius = std::sqrt(psd.x.trace());
  for (const auto& t : decomp.terms) out.terms.push_back({t.weight, t.point});
  return out;
}

ConvexCertificate refine_cert(const ConvexCertificate& cert, const QuadraticSystem& sys,
                              const Vector& b) {
  if (!sys.homogeneous()) {
    throw std::logic_error("refine_cert: rescaling needs a homogeneous system");
  }
  ConvexCertificate out = cert;
  for (auto& t : out.terms) {
    const Vector q = eval_Q(sys, t.point);
    const double q2 = q.squaredNorm();
    if (q2 == 0.0) continue;
    const double gamma = b.dot(q) / q2;
    if (gamma > 0.0) t.point *= std::sqrt(gamma);
  }
  out.radius = std::max(out.radius, out.max_point_norm());
  return out;
}

}  // namespace trisdp::chr
