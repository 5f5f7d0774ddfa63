#include "trisdp/io/result_io.hpp"

#include <cmath>

namespace trisdp::io {

namespace {

constexpr int kVersion = 1;

// Non-finite doubles are written as strings by dump_json; read them back.
double real_from(const Json& j, const std::string& field, const std::string& source) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw ParseError(source, 0, field, "expected a number");
}

const Json& member(const Json& j, const char* key, const std::string& field,
                   const std::string& source) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(source, 0, field.empty() ? key : field + "." + key, "missing");
  }
  return j.at(key);
}

std::string path(const std::string& base, const char* key) {
  return base.empty() ? key : base + "." + key;
}

Json cert_json(const chr::ConvexCertificate& c) {
  Json terms = Json::array();
  for (const auto& t : c.terms) {
    Json term = Json::object();
    term["weight"] = t.weight;
    term["point"] = vector_json(t.point);
    terms.push_back(std::move(term));
  }
  Json out = Json::object();
  out["radius"] = c.radius;
  out["terms"] = std::move(terms);
  return out;
}

chr::ConvexCertificate cert_from(const Json& j, const std::string& field,
                                 const std::string& source) {
  chr::ConvexCertificate c;
  c.radius = real_from(member(j, "radius", field, source), path(field, "radius"), source);
  const Json& terms = member(j, "terms", field, source);
  if (!terms.is_array()) throw ParseError(source, 0, path(field, "terms"), "expected an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string f = path(field, "terms") + "[" + std::to_string(i) + "]";
    chr::CertTerm t;
    t.weight = real_from(member(terms[i], "weight", f, source), f + ".weight", source);
    t.point = vector_from_json(member(terms[i], "point", f, source), f + ".point", source);
    c.terms.push_back(std::move(t));
  }
  return c;
}

}  // namespace

Json vector_json(const linalg::Vector& v) {
  Json a = Json::array();
  for (linalg::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

linalg::Vector vector_from_json(const Json& j, const std::string& field, const std::string& source) {
  if (!j.is_array()) throw ParseError(source, 0, field, "expected an array");
  linalg::Vector v(static_cast<linalg::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<linalg::Index>(i)] =
        real_from(j[i], field + "[" + std::to_string(i) + "]", source);
  }
  return v;
}

solver::Status parse_status(const std::string& name) {
  for (auto s : {solver::Status::kFeasible, solver::Status::kWitness,
                 solver::Status::kRadiusExceeded, solver::Status::kInconclusive}) {
    if (name == solver::status_name(s)) return s;
  }
  throw DataError("unknown status '" + name + "'");
}

void ResultFile::validate() const {
  if (status == solver::Status::kFeasible && !certificate) {
    throw DataError("status feasible requires a certificate");
  }
  if (status == solver::Status::kWitness && !witness) {
    throw DataError("status witness requires a witness");
  }
  if (radius_history.empty()) throw DataError("radius_history is empty");
}

ResultFile result_from_outcome(const solver::SolveOutcome& out, const std::string& command,
                               const ConfigEcho& config) {
  ResultFile r;
  r.command = command;
  r.status = out.status;
  r.residual = out.residual;
  r.iterations = out.iterations;
  r.radius_history = out.radius_history;
  r.config = config;
  r.reason = out.reason;
  r.warnings = out.warnings;
  if (out.status == solver::Status::kFeasible) {
    r.certificate = out.cert;
    if (out.original_cert) r.solution = out.original_cert;
  }
  if (out.witness) {
    WitnessRecord w;
    w.iterate = out.witness->iterate;
    w.normal = out.witness->hyperplane.normal;
    w.offset = out.witness->hyperplane.offset;
    w.radius = out.witness->radius;
    w.gap = out.witness->gap;
    w.lambda = out.witness->lambda;
    w.rule = out.witness->rule == geometry::WitnessRule::kNoPivot ? "no_pivot" : "no_strict_pivot";
    w.iterate_cert = out.witness->iterate_cert;
    r.witness = std::move(w);
  }
  return r;
}

Json to_json(const ResultFile& r) {
  Json j = Json::object();
  j["format"] = "trisdp-result";
  j["version"] = kVersion;
  j["command"] = r.command;
  j["status"] = solver::status_name(r.status);
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["radius_history"] = r.radius_history;
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  Json cfg = Json::object();
  cfg["epsilon"] = r.config.epsilon;
  cfg["seed"] = r.config.seed;
  cfg["r0"] = r.config.r0;
  cfg["r_max"] = r.config.r_max;
  cfg["max_iters"] = r.config.max_iters;
  j["config"] = std::move(cfg);
  j["problem"] = r.problem;
  if (!r.extra.empty()) j["extra"] = r.extra;
  if (r.certificate) j["certificate"] = cert_json(*r.certificate);
  if (r.solution) j["solution"] = cert_json(*r.solution);
  if (r.witness) {
    const auto& w = *r.witness;
    Json wj = Json::object();
    wj["rule"] = w.rule;
    wj["radius"] = w.radius;
    wj["gap"] = w.gap;
    wj["lambda"] = w.lambda;
    wj["iterate"] = vector_json(w.iterate);
    wj["normal"] = vector_json(w.normal);
    wj["offset"] = w.offset;
    if (w.iterate_cert) wj["iterate_certificate"] = cert_json(*w.iterate_cert);
    j["witness"] = std::move(wj);
  }
  return j;
}

ResultFile result_from_json(const Json& j, const std::string& source) {
  if (!j.is_object()) throw ParseError(source, 0, "", "expected a JSON object");
  if (!j.contains("format") || j["format"] != "trisdp-result") {
    throw ParseError(source, 0, "format", "not a trisdp result file");
  }
  if (!j.contains("version") || j["version"] != kVersion) {
    throw ParseError(source, 0, "version", "unsupported schema version");
  }
  ResultFile r;
  std::string field;
  try {
    field = "command";
    r.command = member(j, "command", "", source).get<std::string>();
    field = "status";
    const auto status = member(j, "status", "", source).get<std::string>();
    try {
      r.status = parse_status(status);
    } catch (const DataError& e) {
      throw ParseError(source, 0, "status", e.what());
    }
    r.residual = real_from(member(j, "residual", "", source), "residual", source);
    field = "iterations";
    r.iterations = member(j, "iterations", "", source).get<std::size_t>();
    const linalg::Vector radii =
        vector_from_json(member(j, "radius_history", "", source), "radius_history", source);
    r.radius_history.assign(radii.begin(), radii.end());
    if (j.contains("reason")) {
      field = "reason";
      r.reason = j["reason"].get<std::string>();
    }
    if (j.contains("warnings")) {
      field = "warnings";
      r.warnings = j["warnings"].get<std::vector<std::string>>();
    }
    const Json& cfg = member(j, "config", "", source);
    r.config.epsilon = real_from(member(cfg, "epsilon", "config", source), "config.epsilon", source);
    field = "config.seed";
    r.config.seed = member(cfg, "seed", "config", source).get<std::uint64_t>();
    r.config.r0 = real_from(member(cfg, "r0", "config", source), "config.r0", source);
    r.config.r_max = real_from(member(cfg, "r_max", "config", source), "config.r_max", source);
    field = "config.max_iters";
    r.config.max_iters = member(cfg, "max_iters", "config", source).get<std::size_t>();
    r.problem = member(j, "problem", "", source);
    if (j.contains("extra")) r.extra = j["extra"];
    if (j.contains("certificate")) r.certificate = cert_from(j["certificate"], "certificate", source);
    if (j.contains("solution")) r.solution = cert_from(j["solution"], "solution", source);
    if (j.contains("witness")) {
      const Json& wj = j["witness"];
      WitnessRecord w;
      field = "witness.rule";
      w.rule = member(wj, "rule", "witness", source).get<std::string>();
      if (w.rule != "no_pivot" && w.rule != "no_strict_pivot") {
        throw ParseError(source, 0, "witness.rule", "unknown rule '" + w.rule + "'");
      }
      w.radius = real_from(member(wj, "radius", "witness", source), "witness.radius", source);
      w.gap = real_from(member(wj, "gap", "witness", source), "witness.gap", source);
      w.lambda = real_from(member(wj, "lambda", "witness", source), "witness.lambda", source);
      w.iterate = vector_from_json(member(wj, "iterate", "witness", source), "witness.iterate",
                                   source);
      w.normal = vector_from_json(member(wj, "normal", "witness", source), "witness.normal",
                                  source);
      w.offset = real_from(member(wj, "offset", "witness", source), "witness.offset", source);
      if (wj.contains("iterate_certificate")) {
        w.iterate_cert = cert_from(wj["iterate_certificate"], "witness.iterate_certificate", source);
      }
      r.witness = std::move(w);
    }
  } catch (const Json::exception&) {
    throw ParseError(source, 0, field, "wrong type");
  }
  try {
    r.validate();
  } catch (const DataError& e) {
    throw ParseError(source, 0, "status", e.what());
  }
  return r;
}

std::string serialize_result(const ResultFile& r) { return dump_json(to_json(r)); }

ResultFile parse_result_text(const std::string& text, const std::string& source) {
  return result_from_json(parse_json(text, source), source);
}

ResultFile parse_result(const std::string& path) { return parse_result_text(read_file(path), path); }

}  // namespace trisdp::io
