#pragma once

#include <string>

#include "trisdp/apps/maxcut.hpp"

namespace trisdp::io {

/// Edge list, one "u v [w]" per line with 0-based vertices and weight 1 when
/// omitted; '#' starts a comment. An optional first line "n edge_count" fixes
/// the vertex count; it is recognized as a header only when the number of
/// edge lines that follow equals edge_count. Without a header n is one more
/// than the largest vertex index.
apps::Graph parse_graph_text(const std::string& text, const std::string& source = "<input>");
apps::Graph parse_graph(const std::string& path);

/// Header line followed by "u v w" lines.
std::string serialize_graph(const apps::Graph& g);

}  // namespace trisdp::io
