#include "trisdp/io/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "trisdp/io/json_text.hpp"

namespace trisdp::io {

namespace {

using linalg::Index;
using linalg::Triplet;

constexpr int kVersion = 1;

class LineReader {
 public:
  LineReader(const std::string& source, int line, std::vector<std::string> tokens)
      : source_(source), line_(line), tokens_(std::move(tokens)) {}

  std::size_t size() const { return tokens_.size(); }

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    throw ParseError(source_, line_, field, msg);
  }

  void expect_count(std::size_t want, const std::string& field) const {
    if (tokens_.size() != want) {
      fail(field, "expected " + std::to_string(want - 1) + " values, found " +
                      std::to_string(tokens_.size() - 1));
    }
  }

  double real(std::size_t i, const std::string& field) const {
    const std::string& t = tokens_.at(i);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail(field, "not a number: '" + t + "'");
    if (!std::isfinite(v)) fail(field, "value must be finite");
    return v;
  }

  Index index(std::size_t i, const std::string& field, Index bound) const {
    const std::string& t = tokens_.at(i);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail(field, "not an integer: '" + t + "'");
    if (v < 0 || v >= bound) {
      fail(field, "index " + t + " out of range [0, " + std::to_string(bound) + ")");
    }
    return static_cast<Index>(v);
  }

  Index count(std::size_t i, const std::string& field) const {
    const std::string& t = tokens_.at(i);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || v < 1) {
      fail(field, "expected a positive integer, found '" + t + "'");
    }
    return static_cast<Index>(v);
  }

 private:
  const std::string& source_;
  int line_;
  std::vector<std::string> tokens_;
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line.substr(0, line.find('#')));
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::vector<Triplet> upper(std::vector<Triplet> t) {
  for (auto& e : t) {
    if (e.row > e.col) std::swap(e.row, e.col);
  }
  return t;
}

}  // namespace

Instance parse_instance_text(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool have_header = false;
  Index n = 0, m = 0;
  std::optional<linalg::Vector> rhs;
  std::vector<std::vector<Triplet>> quad;
  std::vector<std::set<std::pair<Index, Index>>> seen;
  std::optional<std::vector<linalg::Vector>> lin;
  std::vector<bool> lin_seen;
  std::optional<linalg::Vector> constant;
  std::vector<bool> constant_seen;
  std::optional<std::vector<Triplet>> objective;
  std::set<std::pair<Index, Index>> objective_seen;
  int last_line = 0;

  auto need_shape = [&](const LineReader& r, const std::string& field) {
    if (n == 0 || m == 0) r.fail(field, "'n' and 'm' must come first");
  };

  while (std::getline(in, raw)) {
    ++line_no;
    auto tokens = tokenize(raw);
    if (tokens.empty()) continue;
    last_line = line_no;
    const std::string key = tokens[0];
    LineReader r(source, line_no, std::move(tokens));
    if (!have_header) {
      if (key != "trisdp-instance") r.fail("header", "expected 'trisdp-instance <version>'");
      r.expect_count(2, "header");
      if (r.count(1, "header.version") != kVersion) {
        r.fail("header.version", "unsupported schema version");
      }
      have_header = true;
    } else if (key == "n") {
      if (n) r.fail("n", "given twice");
      r.expect_count(2, "n");
      n = r.count(1, "n");
    } else if (key == "m") {
      if (m) r.fail("m", "given twice");
      r.expect_count(2, "m");
      m = r.count(1, "m");
      quad.assign(static_cast<std::size_t>(m), {});
      seen.assign(static_cast<std::size_t>(m), {});
    } else if (key == "rhs") {
      need_shape(r, "rhs");
      if (rhs) r.fail("rhs", "given twice");
      r.expect_count(static_cast<std::size_t>(m) + 1, "rhs");
      rhs = linalg::Vector(m);
      for (Index k = 0; k < m; ++k) {
        (*rhs)[k] = r.real(static_cast<std::size_t>(k) + 1, "rhs[" + std::to_string(k) + "]");
      }
    } else if (key == "entry") {
      need_shape(r, "entry");
      r.expect_count(5, "entry");
      const Index k = r.index(1, "entry.equation", m);
      Index i = r.index(2, "entry.row", n);
      Index j = r.index(3, "entry.col", n);
      const double v = r.real(4, "entry.value");
      if (i > j) std::swap(i, j);
      if (!seen[static_cast<std::size_t>(k)].insert({i, j}).second) {
        r.fail("entry", "duplicate entry (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") in equation " + std::to_string(k));
      }
      quad[static_cast<std::size_t>(k)].push_back({i, j, v});
    } else if (key == "linear") {
      need_shape(r, "linear");
      r.expect_count(static_cast<std::size_t>(n) + 2, "linear");
      const Index k = r.index(1, "linear.equation", m);
      if (!lin) {
        lin.emplace(static_cast<std::size_t>(m), linalg::Vector::Zero(n));
        lin_seen.assign(static_cast<std::size_t>(m), false);
      }
      if (lin_seen[static_cast<std::size_t>(k)]) r.fail("linear", "equation given twice");
      lin_seen[static_cast<std::size_t>(k)] = true;
      for (Index i = 0; i < n; ++i) {
        (*lin)[static_cast<std::size_t>(k)][i] =
            r.real(static_cast<std::size_t>(i) + 2, "linear[" + std::to_string(i) + "]");
      }
    } else if (key == "constant") {
      need_shape(r, "constant");
      r.expect_count(3, "constant");
      const Index k = r.index(1, "constant.equation", m);
      if (!constant) {
        constant = linalg::Vector::Zero(m);
        constant_seen.assign(static_cast<std::size_t>(m), false);
      }
      if (constant_seen[static_cast<std::size_t>(k)]) r.fail("constant", "equation given twice");
      constant_seen[static_cast<std::size_t>(k)] = true;
      (*constant)[k] = r.real(2, "constant.value");
    } else if (key == "objective") {
      need_shape(r, "objective");
      r.expect_count(4, "objective");
      Index i = r.index(1, "objective.row", n);
      Index j = r.index(2, "objective.col", n);
      const double v = r.real(3, "objective.value");
      if (i > j) std::swap(i, j);
      if (!objective) objective.emplace();
      if (!objective_seen.insert({i, j}).second) {
        r.fail("objective", "duplicate entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                ")");
      }
      objective->push_back({i, j, v});
    } else {
      r.fail(key, "unknown record");
    }
  }

  if (!have_header) throw ParseError(source, 0, "header", "empty instance file");
  if (n == 0) throw ParseError(source, last_line, "n", "missing");
  if (m == 0) throw ParseError(source, last_line, "m", "missing");
  if (!rhs) throw ParseError(source, last_line, "rhs", "missing");

  Instance out;
  out.system.n = n;
  for (auto& t : quad) out.system.quad.push_back(linalg::SymMatrix::from_triplets(n, upper(t)));
  out.system.rhs = *rhs;
  out.system.lin = std::move(lin);
  out.system.constant = std::move(constant);
  out.system.validate();
  if (objective) out.objective = linalg::SymMatrix::from_triplets(n, upper(*objective));
  return out;
}

Instance parse_instance(const std::string& path) { return parse_instance_text(read_file(path), path); }

std::string serialize_instance(const chr::QuadraticSystem& sys,
                               const std::optional<linalg::SymMatrix>& objective) {
  sys.validate();
  std::ostringstream out;
  out << "trisdp-instance " << kVersion << "\n";
  out << "n " << sys.n << "\n";
  out << "m " << sys.m() << "\n";
  out << "rhs";
  for (Index k = 0; k < sys.m(); ++k) out << ' ' << format_double(sys.rhs[k]);
  out << "\n";
  for (Index k = 0; k < sys.m(); ++k) {
    for (const auto& t : sys.quad[static_cast<std::size_t>(k)].entries()) {
      out << "entry " << k << ' ' << t.row << ' ' << t.col << ' ' << format_double(t.value)
          << "\n";
    }
  }
  if (sys.lin) {
    for (Index k = 0; k < sys.m(); ++k) {
      const auto& c = (*sys.lin)[static_cast<std::size_t>(k)];
      if (c.isZero(0.0)) continue;
      out << "linear " << k;
      for (Index i = 0; i < sys.n; ++i) out << ' ' << format_double(c[i]);
      out << "\n";
    }
  }
  if (sys.constant) {
    for (Index k = 0; k < sys.m(); ++k) {
      if ((*sys.constant)[k] != 0.0) {
        out << "constant " << k << ' ' << format_double((*sys.constant)[k]) << "\n";
      }
    }
  }
  if (objective) {
    if (objective->order() != sys.n) throw DimensionError("objective order != n");
    for (const auto& t : objective->entries()) {
      out << "objective " << t.row << ' ' << t.col << ' ' << format_double(t.value) << "\n";
    }
  }
  return out.str();
}

}  // namespace trisdp::io
