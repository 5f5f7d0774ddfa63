#include "trisdp/apps/binary_quadratic.hpp"

#include <random>

#include "trisdp/errors.hpp"

namespace trisdp::apps {

chr::QuadraticSystem binary_feas_instance(const linalg::SymMatrix& a, double alpha) {
  const linalg::Index n = a.order();
  if (n < 1) throw DimensionError("binary_feas_instance: empty matrix");
  if (!std::isfinite(alpha)) throw DataError("binary_feas_instance: alpha is not finite");
  std::vector<linalg::SymMatrix> quad;
  quad.reserve(n + 1);
  quad.push_back(a);
  for (linalg::Index i = 0; i < n; ++i) {
    quad.push_back(linalg::SymMatrix::from_triplets(n, {{i, i, 1.0}}));
  }
  linalg::Vector rhs = linalg::Vector::Ones(n + 1);
  rhs[0] = alpha;
  return chr::QuadraticSystem::homogeneous_system(std::move(quad), std::move(rhs));
}

BinaryBenchInstance random_binary_instance(linalg::Index n, double density, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_binary_instance: n must be positive");
  if (!(density >= 0.0 && density <= 1.0)) {
    throw std::invalid_argument("random_binary_instance: density must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<linalg::Triplet> trips;
  for (linalg::Index i = 0; i < n; ++i) {
    for (linalg::Index j = i + 1; j < n; ++j) {
      if (unif(rng) < density) trips.push_back({i, j, unif(rng) < 0.5 ? -1.0 : 1.0});
    }
  }
  BinaryBenchInstance inst;
  inst.a = linalg::SymMatrix::from_triplets(n, std::move(trips));
  inst.planted.resize(n);
  for (linalg::Index i = 0; i < n; ++i) inst.planted[i] = unif(rng) < 0.5 ? -1.0 : 1.0;
  inst.alpha = inst.planted.dot(linalg::matvec(inst.a, inst.planted));
  return inst;
}

}  // namespace trisdp::apps
