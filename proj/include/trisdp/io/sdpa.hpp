#pragma once

#include <string>
#include <vector>

#include "trisdp/chr/quadratic_system.hpp"

namespace trisdp::io {

/// An SDPA sparse problem read in dual form
///   max F0 . X  s.t.  F_k . X = c_k, X PSD,
/// as the system A_k = F_k, b = c with objective A0 = F0. Blocks are laid out
/// along the diagonal of one symmetric matrix; a negative block size (a
/// diagonal block) contributes that many diagonal entries.
struct SdpaProblem {
  chr::QuadraticSystem system;
  linalg::SymMatrix objective;
  std::vector<linalg::Index> block_sizes;
};

/// Throws ParseError with the line number, naming the block for block errors.
SdpaProblem parse_sdpa_sparse_text(const std::string& text, const std::string& source = "<input>");
SdpaProblem parse_sdpa_sparse(const std::string& path);

}  // namespace trisdp::io
