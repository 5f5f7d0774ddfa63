#pragma once

#include <cstdint>

#include "trisdp/chr/quadratic_system.hpp"

namespace trisdp::apps {

/// Relaxation of x^T A x = alpha, x in {-1, 1}^n: equations
/// (A, e_1 e_1^T, ..., e_n e_n^T) with right-hand side (alpha, 1, ..., 1).
chr::QuadraticSystem binary_feas_instance(const linalg::SymMatrix& a, double alpha);

struct BinaryBenchInstance {
  linalg::SymMatrix a;
  double alpha = 0.0;
  /// Sign vector with x^T A x = alpha.
  linalg::Vector planted;
};

/// Random symmetric matrix with off-diagonal entries +-1 at the given density
/// and zero diagonal; alpha is taken from a random sign vector, so the
/// instance is binary feasible.
BinaryBenchInstance random_binary_instance(linalg::Index n, double density, std::uint64_t seed);

}  // namespace trisdp::apps
