#pragma once

#include <string>

#include <json.hpp>

#include "trisdp/errors.hpp"

namespace trisdp::io {

using Json = nlohmann::ordered_json;

/// Parse failure in an input file. what() reads "<source>:<line>: <field>: <msg>"
/// with the parts that are known.
class ParseError : public DataError {
 public:
  ParseError(const std::string& source, int line, const std::string& field,
             const std::string& message);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Shortest decimal string that reads back to exactly `v`; "nan", "inf" and
/// "-inf" are written as JSON strings by dump_json.
std::string format_double(double v);

/// Deterministic rendering: keys in insertion order, two-space indent, short
/// numeric arrays on one line, doubles via format_double.
std::string dump_json(const Json& j);

/// Parses JSON text, turning syntax errors into ParseError with a line.
Json parse_json(const std::string& text, const std::string& source);

/// Whole file as a string; DataError when it cannot be read.
std::string read_file(const std::string& path);

}  // namespace trisdp::io
