#include "trisdp/geometry/min_norm.hpp"

#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <limits>

#include "trisdp/errors.hpp"

namespace trisdp::geometry {

namespace {

// A point must beat the current one by more than rounding in x^T p.
constexpr double kImproveTol = 1e-14;

}  // namespace

MinNormCorral::MinNormCorral(Vector target) : target_(std::move(target)) {
  current_ = Vector::Zero(target_.size());
}

Vector MinNormCorral::point() const { return current_ + target_; }

double MinNormCorral::gap() const { return current_.norm(); }

void MinNormCorral::refresh_current() {
  current_.setZero();
  for (std::size_t i = 0; i < ids_.size(); ++i) current_ += weights_[i] * shifted_[i];
}

void MinNormCorral::add_column(const Vector& shifted, std::size_t id) {
  const auto k = static_cast<linalg::Index>(ids_.size());
  Vector cross(k);
  for (linalg::Index i = 0; i < k; ++i) cross[i] = 1.0 + shifted_[i].dot(shifted);
  Vector col = k ? Vector(r_.topLeftCorner(k, k).transpose().triangularView<Eigen::Lower>().solve(
                       cross))
                 : Vector(0);
  const double rho2 = 1.0 + shifted.squaredNorm() - col.squaredNorm();
  DenseMatrix next = DenseMatrix::Zero(k + 1, k + 1);
  if (k) {
    next.topLeftCorner(k, k) = r_.topLeftCorner(k, k);
    next.col(k).head(k) = col;
  }
  next(k, k) = std::sqrt(std::max(rho2, 0.0));
  r_ = std::move(next);
  ids_.push_back(id);
  weights_.push_back(0.0);
  shifted_.push_back(shifted);
}

void MinNormCorral::remove_column(std::size_t j) {
  const auto k = static_cast<linalg::Index>(ids_.size());
  const auto jj = static_cast<linalg::Index>(j);
  DenseMatrix h(k, k - 1);
  h.leftCols(jj) = r_.leftCols(jj);
  h.rightCols(k - 1 - jj) = r_.rightCols(k - 1 - jj);
  for (linalg::Index c = jj; c < k - 1; ++c) {
    Eigen::JacobiRotation<double> g;
    g.makeGivens(h(c, c), h(c + 1, c));
    h.applyOnTheLeft(c, c + 1, g.adjoint());
    h(c + 1, c) = 0.0;
  }
  r_ = h.topRows(k - 1);
  ids_.erase(ids_.begin() + jj);
  weights_.erase(weights_.begin() + jj);
  shifted_.erase(shifted_.begin() + jj);
}

// Affine minimizer of the corral: solve R^T R nu = 1 and normalize.
Vector MinNormCorral::solve_affine() const {
  const auto k = static_cast<linalg::Index>(ids_.size());
  Vector nu = Vector::Ones(k);
  r_.topLeftCorner(k, k).transpose().triangularView<Eigen::Lower>().solveInPlace(nu);
  r_.topLeftCorner(k, k).triangularView<Eigen::Upper>().solveInPlace(nu);
  return nu / nu.sum();
}

void MinNormCorral::minor_cycle() {
  while (!ids_.empty()) {
    const Vector mu = solve_affine();
    if (!mu.allFinite()) throw DegenerateError("min-norm corral: singular factor");
    if (mu.minCoeff() > 0.0) {
      for (std::size_t i = 0; i < ids_.size(); ++i) weights_[i] = mu[static_cast<linalg::Index>(i)];
      break;
    }
    double theta = 1.0;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      const double m = mu[static_cast<linalg::Index>(i)];
      if (m <= 0.0) theta = std::min(theta, weights_[i] / (weights_[i] - m));
    }
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      weights_[i] = theta * mu[static_cast<linalg::Index>(i)] + (1.0 - theta) * weights_[i];
    }
    // Drop the emptied points, at least one.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < ids_.size(); ++i) {
      if (weights_[i] < weights_[worst]) worst = i;
    }
    for (std::size_t i = ids_.size(); i-- > 0;) {
      if (weights_[i] <= 0.0 || i == worst) remove_column(i);
    }
    double total = 0.0;
    for (double w : weights_) total += w;
    for (double& w : weights_) w /= total;
  }
  refresh_current();
}

bool MinNormCorral::offer(const Vector& point, std::size_t id) {
  if (point.size() != target_.size()) throw DimensionError("MinNormCorral: point dimension");
  const Vector shifted = point - target_;
  scale_ = std::max(scale_, shifted.squaredNorm());
  if (ids_.empty()) {
    add_column(shifted, id);
    weights_[0] = 1.0;
    refresh_current();
    return true;
  }
  const double xx = current_.squaredNorm();
  if (current_.dot(shifted) >= xx - kImproveTol * std::sqrt(xx * scale_)) return false;

  // Nearly dependent points make the factor ill-conditioned; keep the old
  // state and refuse the point when the re-solve does not actually improve.
  const auto saved_r = r_;
  const auto saved_ids = ids_;
  const auto saved_w = weights_;
  const auto saved_shifted = shifted_;
  const Vector saved_current = current_;
  bool ok = true;
  try {
    add_column(shifted, id);
    ok = r_(r_.rows() - 1, r_.cols() - 1) > 0.0;
    if (ok) minor_cycle();
  } catch (const DegenerateError&) {
    ok = false;
  }
  ok = ok && current_.allFinite() && current_.squaredNorm() < xx;
  if (!ok) {
    r_ = saved_r;
    ids_ = saved_ids;
    weights_ = saved_w;
    shifted_ = saved_shifted;
    current_ = saved_current;
  }
  return ok;
}

void MinNormCorral::reset(const std::vector<Vector>& points, const std::vector<std::size_t>& ids) {
  if (points.size() != ids.size()) throw DimensionError("MinNormCorral::reset: size mismatch");
  ids_.clear();
  weights_.clear();
  shifted_.clear();
  r_.resize(0, 0);
  current_.setZero();
  scale_ = 0.0;
  if (points.empty()) return;
  std::size_t first = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if ((points[i] - target_).squaredNorm() < (points[first] - target_).squaredNorm()) first = i;
  }
  offer(points[first], ids[first]);
  // Major cycles: bring in the point most aligned against the current one.
  for (std::size_t round = 0; round < 4 * points.size() + 10; ++round) {
    std::size_t best = points.size();
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (std::find(ids_.begin(), ids_.end(), ids[i]) != ids_.end()) continue;
      const double v = current_.dot(points[i] - target_);
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
    if (best == points.size() || !offer(points[best], ids[best])) break;
  }
}

}  // namespace trisdp::geometry
