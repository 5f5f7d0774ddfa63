#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trisdp/io/json_text.hpp"
#include "trisdp/solver/feasibility.hpp"

namespace trisdp::io {

struct WitnessRecord {
  /// b', a point of C(radius).
  linalg::Vector iterate;
  linalg::Vector normal;
  double offset = 0.0;
  double radius = 0.0;
  double gap = 0.0;
  double lambda = 0.0;
  /// "no_strict_pivot" or "no_pivot".
  std::string rule;
  std::optional<chr::ConvexCertificate> iterate_cert;
};

struct ConfigEcho {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  double r0 = 0.0;
  double r_max = 0.0;
  std::size_t max_iters = 0;
};

/// Everything a run writes out. `problem` records how the checked system is
/// rebuilt from the instance file ("kind" plus parameters); `extra` holds
/// command-specific results such as an objective value or a cut.
struct ResultFile {
  std::string command;
  solver::Status status = solver::Status::kInconclusive;
  double residual = 0.0;
  std::size_t iterations = 0;
  std::vector<double> radius_history;
  /// Certificate for the system actually solved (homogenized or lifted).
  std::optional<chr::ConvexCertificate> certificate;
  /// The same certificate in the original variables, for inhomogeneous input.
  std::optional<chr::ConvexCertificate> solution;
  std::optional<WitnessRecord> witness;
  ConfigEcho config;
  std::string reason;
  std::vector<std::string> warnings;
  Json problem = Json::object();
  Json extra = Json::object();

  /// Throws DataError when a field required by the status is missing.
  void validate() const;
};

solver::Status parse_status(const std::string& name);

/// Fills status, residual, iterations, radii, certificate/solution and witness
/// from a solver outcome. The certificate is attached for feasible outcomes
/// and the witness whenever the outcome has one.
ResultFile result_from_outcome(const solver::SolveOutcome& out, const std::string& command,
                               const ConfigEcho& config);

Json to_json(const ResultFile& r);
/// Throws ParseError naming the missing or malformed field.
ResultFile result_from_json(const Json& j, const std::string& source = "<result>");

std::string serialize_result(const ResultFile& r);
ResultFile parse_result_text(const std::string& text, const std::string& source = "<result>");
ResultFile parse_result(const std::string& path);

Json vector_json(const linalg::Vector& v);
linalg::Vector vector_from_json(const Json& j, const std::string& field, const std::string& source);

}  // namespace trisdp::io
