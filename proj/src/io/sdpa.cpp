#include "trisdp/io/sdpa.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "trisdp/io/json_text.hpp"

namespace trisdp::io {

namespace {

using linalg::Index;
using linalg::Triplet;

// Header lines may separate numbers with commas, braces or parentheses.
std::vector<std::string> header_tokens(const std::string& line) {
  std::string clean = line;
  for (char& ch : clean) {
    if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')' || ch == '\t') ch = ' ';
  }
  std::istringstream ss(clean);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool parse_real(const std::string& t, double& v) {
  // SDPA files sometimes carry a leading '+', which from_chars rejects.
  const char* first = t.data() + (t.size() > 1 && t[0] == '+' ? 1 : 0);
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  return ec == std::errc() && ptr == t.data() + t.size() && std::isfinite(v);
}

bool parse_int(const std::string& t, long long& v) {
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec == std::errc() && ptr == t.data() + t.size()) return true;
  // Integers written as reals, e.g. "2.0".
  double d = 0.0;
  if (parse_real(t, d) && d == std::floor(d) && std::abs(d) < 1e15) {
    v = static_cast<long long>(d);
    return true;
  }
  return false;
}

}  // namespace

SdpaProblem parse_sdpa_sparse_text(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;

  // Header: m, nblocks, block sizes, c. Comment lines before m start with
  // '"' or '*'.
  long long m = -1, nblocks = -1;
  std::vector<Index> sizes;
  std::vector<double> c;
  int stage = 0;
  while (stage < 4 && std::getline(in, raw)) {
    ++line_no;
    if (stage == 0 && (raw.empty() || raw[0] == '"' || raw[0] == '*')) continue;
    auto toks = header_tokens(raw);
    if (toks.empty()) continue;
    auto fail = [&](const std::string& field, const std::string& msg) {
      throw ParseError(source, line_no, field, msg);
    };
    std::size_t pos = 0;
    while (pos < toks.size() && stage < 4) {
      if (stage == 0) {
        if (!parse_int(toks[pos], m) || m < 1) fail("mDIM", "expected a positive integer");
        ++pos;
        ++stage;
        break;  // rest of the line is a comment
      } else if (stage == 1) {
        if (!parse_int(toks[pos], nblocks) || nblocks < 1) {
          fail("nBLOCK", "expected a positive integer");
        }
        ++pos;
        ++stage;
        break;
      } else if (stage == 2) {
        long long s = 0;
        if (!parse_int(toks[pos], s)) fail("bLOCKsTRUCT", "expected an integer");
        if (s == 0) {
          fail("bLOCKsTRUCT", "block " + std::to_string(sizes.size() + 1) + " has size 0");
        }
        sizes.push_back(static_cast<Index>(s));
        ++pos;
        if (static_cast<long long>(sizes.size()) == nblocks) {
          ++stage;
          break;
        }
      } else {
        double v = 0.0;
        if (!parse_real(toks[pos], v)) fail("c", "expected a number, found '" + toks[pos] + "'");
        c.push_back(v);
        ++pos;
        if (static_cast<long long>(c.size()) == m) {
          ++stage;
          break;
        }
      }
    }
  }
  if (stage < 4) throw ParseError(source, line_no, "header", "file ends inside the header");

  std::vector<Index> offset(sizes.size() + 1, 0);
  for (std::size_t b = 0; b < sizes.size(); ++b) offset[b + 1] = offset[b] + std::abs(sizes[b]);
  const Index n = offset.back();

  std::vector<std::map<std::pair<Index, Index>, double>> mats(static_cast<std::size_t>(m) + 1);
  while (std::getline(in, raw)) {
    ++line_no;
    auto toks = header_tokens(raw);
    if (toks.empty() || toks[0][0] == '"' || toks[0][0] == '*') continue;
    auto fail = [&](const std::string& field, const std::string& msg) {
      throw ParseError(source, line_no, field, msg);
    };
    if (toks.size() < 5) fail("entry", "expected 'matno blkno i j value'");
    long long k = 0, blk = 0, i = 0, j = 0;
    double v = 0.0;
    if (!parse_int(toks[0], k) || k < 0 || k > m) {
      fail("entry.matno", "out of range [0, " + std::to_string(m) + "]");
    }
    if (!parse_int(toks[1], blk) || blk < 1 || blk > nblocks) {
      fail("entry.blkno", "block index '" + toks[1] + "' out of range");
    }
    const Index bsize = sizes[static_cast<std::size_t>(blk - 1)];
    const Index dim = std::abs(bsize);
    if (!parse_int(toks[2], i) || i < 1 || i > dim) {
      fail("entry.i", "index out of range for block " + std::to_string(blk));
    }
    if (!parse_int(toks[3], j) || j < 1 || j > dim) {
      fail("entry.j", "index out of range for block " + std::to_string(blk));
    }
    if (!parse_real(toks[4], v)) fail("entry.value", "expected a finite number");
    if (bsize < 0 && i != j) {
      fail("entry", "off-diagonal entry in diagonal block " + std::to_string(blk));
    }
    Index r = offset[static_cast<std::size_t>(blk - 1)] + static_cast<Index>(i) - 1;
    Index s = offset[static_cast<std::size_t>(blk - 1)] + static_cast<Index>(j) - 1;
    if (r > s) std::swap(r, s);
    auto [it, fresh] = mats[static_cast<std::size_t>(k)].emplace(std::make_pair(r, s), v);
    if (!fresh) {
      fail("entry", "duplicate entry (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") in matrix " + std::to_string(k) + " block " + std::to_string(blk));
    }
  }

  auto to_sym = [&](const std::map<std::pair<Index, Index>, double>& e) {
    std::vector<Triplet> t;
    for (const auto& [rc, v] : e) t.push_back({rc.first, rc.second, v});
    return linalg::SymMatrix::from_triplets(n, std::move(t));
  };

  SdpaProblem out;
  out.block_sizes = sizes;
  out.objective = to_sym(mats[0]);
  out.system.n = n;
  for (long long k = 1; k <= m; ++k) {
    out.system.quad.push_back(to_sym(mats[static_cast<std::size_t>(k)]));
  }
  out.system.rhs = Eigen::Map<const linalg::Vector>(c.data(), static_cast<Index>(c.size()));
  out.system.validate();
  return out;
}

SdpaProblem parse_sdpa_sparse(const std::string& path) {
  return parse_sdpa_sparse_text(read_file(path), path);
}

}  // namespace trisdp::io
