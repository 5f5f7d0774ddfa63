#pragma once

#include <optional>
#include <string>

#include "trisdp/chr/quadratic_system.hpp"

namespace trisdp::io {

/// Native instance: a quadratic system plus an optional objective matrix A0.
///
/// Text format, one record per line, '#' starts a comment:
///
///     trisdp-instance 1
///     n 2
///     m 1
///     rhs 4
///     entry 0 0 0 1        equation row col value (0-based, upper or lower)
///     entry 0 1 1 1
///     linear 0 1 -2        equation, then n coefficients   (optional)
///     constant 0 0.5       equation, value                  (optional)
///     objective 0 1 2.5    row col value of A0              (optional)
struct Instance {
  chr::QuadraticSystem system;
  std::optional<linalg::SymMatrix> objective;
};

/// Throws ParseError with the line and field of the first problem.
Instance parse_instance_text(const std::string& text, const std::string& source = "<input>");
Instance parse_instance(const std::string& path);

/// Canonical form: entries sorted by (equation, row, col) with row <= col,
/// doubles in shortest round-trip notation.
std::string serialize_instance(const chr::QuadraticSystem& sys,
                               const std::optional<linalg::SymMatrix>& objective = std::nullopt);

}  // namespace trisdp::io
