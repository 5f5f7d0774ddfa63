#include "trisdp/io/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "trisdp/io/json_text.hpp"

namespace trisdp::io {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

bool to_index(const std::string& t, long long& v) {
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  return ec == std::errc() && ptr == t.data() + t.size();
}

}  // namespace

apps::Graph parse_graph_text(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string raw;
  std::vector<Line> lines;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::istringstream ss(raw.substr(0, raw.find('#')));
    Line l{number, {}};
    std::string tok;
    while (ss >> tok) l.tokens.push_back(tok);
    if (!l.tokens.empty()) lines.push_back(std::move(l));
  }

  std::size_t first = 0;
  long long declared_n = -1;
  if (!lines.empty() && lines[0].tokens.size() == 2) {
    long long a = 0, b = 0;
    if (to_index(lines[0].tokens[0], a) && to_index(lines[0].tokens[1], b) && a >= 1 &&
        b == static_cast<long long>(lines.size()) - 1) {
      declared_n = a;
      first = 1;
    }
  }

  apps::Graph g;
  std::set<std::pair<long long, long long>> seen;
  long long max_index = -1;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const Line& l = lines[i];
    auto fail = [&](const std::string& field, const std::string& msg) {
      throw ParseError(source, l.number, field, msg);
    };
    if (l.tokens.size() < 2 || l.tokens.size() > 3) fail("edge", "expected 'u v [w]'");
    long long u = 0, v = 0;
    if (!to_index(l.tokens[0], u) || u < 0) fail("edge.u", "expected a vertex index");
    if (!to_index(l.tokens[1], v) || v < 0) fail("edge.v", "expected a vertex index");
    double w = 1.0;
    if (l.tokens.size() == 3) {
      const std::string& t = l.tokens[2];
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), w);
      if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(w)) {
        fail("edge.w", "expected a finite weight");
      }
    }
    if (u == v) fail("edge", "self-loop at vertex " + std::to_string(u));
    if (declared_n >= 0 && (u >= declared_n || v >= declared_n)) {
      fail(u >= declared_n ? "edge.u" : "edge.v",
           "vertex out of range [0, " + std::to_string(declared_n) + ")");
    }
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) {
      fail("edge", "duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
    }
    max_index = std::max(max_index, v);
    g.edges.push_back({static_cast<linalg::Index>(u), static_cast<linalg::Index>(v), w});
  }
  g.n = static_cast<linalg::Index>(declared_n >= 0 ? declared_n : max_index + 1);
  if (g.n < 1) throw ParseError(source, 0, "", "graph has no vertices");
  g.validate();
  return g;
}

apps::Graph parse_graph(const std::string& path) { return parse_graph_text(read_file(path), path); }

std::string serialize_graph(const apps::Graph& g) {
  std::ostringstream out;
  out << g.n << ' ' << g.edges.size() << "\n";
  for (const auto& e : g.edges) out << e.u << ' ' << e.v << ' ' << format_double(e.w) << "\n";
  return out.str();
}

}  // namespace trisdp::io
