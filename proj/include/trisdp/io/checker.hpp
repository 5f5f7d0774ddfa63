#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trisdp/apps/maxcut.hpp"
#include "trisdp/io/result_io.hpp"

namespace trisdp::io {

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;

  bool passed() const;
  /// Names of the failed checks, in order.
  std::vector<std::string> failures() const;
  std::string summary() const;
};

/// The system a result's certificate and witness refer to, rebuilt from the
/// instance file according to result.problem, plus the original system and
/// graph when they matter to further checks.
struct CheckedProblem {
  chr::QuadraticSystem system;
  std::optional<chr::QuadraticSystem> original;
  std::optional<apps::Graph> graph;
};

CheckedProblem rebuild_problem(const std::string& instance_path, const ResultFile& result);

/// Recomputes everything the result claims from scratch. Certificates: weights,
/// point norms, image and residual, and for homogeneous systems the matrix
/// X = sum w_i x_i x_i^T with A(X), Tr(X) and its smallest eigenvalue.
/// Witnesses: the bisector, the side of b, membership of b' through its
/// certificate, and the pivot inequality against a fresh maximization of
/// (b - b')^T y over C(r) (dense eigensolver up to order 200, a trust-region
/// solve for systems with linear terms). `tol` is relative to the scale of
/// the data.
CheckReport check_result(const CheckedProblem& problem, const ResultFile& result,
                         double tol = 1e-7);

/// File-level entry point used by the check-cert command.
CheckReport check_certificate(const std::string& instance_path, const std::string& result_path,
                              double tol = 1e-7);

}  // namespace trisdp::io
