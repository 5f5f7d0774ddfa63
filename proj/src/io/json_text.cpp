#include "trisdp/io/json_text.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace trisdp::io {

namespace {

std::string where(const std::string& source, int line, const std::string& field) {
  std::string out = source;
  if (line > 0) out += ":" + std::to_string(line);
  if (!field.empty()) out += (out.empty() ? "" : ": ") + field;
  return out;
}

bool is_flat_array(const Json& j) {
  if (!j.is_array() || j.size() > 16) return false;
  for (const auto& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

void write_scalar(const Json& j, std::string& out) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v)) {
      out += format_double(v);
    } else {
      out += '"' + format_double(v) + '"';
    }
  } else {
    out += j.dump();
  }
}

void write(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += inner + Json(it.key()).dump() + ": ";
      write(it.value(), indent + 1, out);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    if (is_flat_array(j)) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        write_scalar(j[i], out);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += inner;
      write(j[i], indent + 1, out);
    }
    out += "\n" + pad + "]";
  } else {
    write_scalar(j, out);
  }
}

}  // namespace

ParseError::ParseError(const std::string& source, int line, const std::string& field,
                       const std::string& message)
    : DataError(where(source, line, field) + ": " + message), line_(line), field_(field) {}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  // Keep doubles recognizable as such when they happen to be integral.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string dump_json(const Json& j) {
  std::string out;
  write(j, 0, out);
  out += "\n";
  return out;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Byte offset to line number.
    int line = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < end; ++i) line += text[i] == '\n';
    throw ParseError(source, line, "", "malformed JSON");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace trisdp::io
