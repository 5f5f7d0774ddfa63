#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "support/generators.hpp"
#include "trisdp/io/checker.hpp"
#include "trisdp/io/graph_io.hpp"
#include "trisdp/io/instance_io.hpp"
#include "trisdp/io/json_text.hpp"
#include "trisdp/io/result_io.hpp"
#include "trisdp/io/sdpa.hpp"

using namespace trisdp;
using namespace trisdp::io;
using gen::Rng;
using linalg::DenseMatrix;
using linalg::Index;
using linalg::Vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

const char* kIdentity =
    "trisdp-instance 1\n"
    "# x1^2 + x2^2 = 4\n"
    "n 2\n"
    "m 1\n"
    "rhs 4\n"
    "entry 0 0 0 1\n"
    "entry 0 1 1 1\n";

std::string expect_parse_error(const std::string& text) {
  try {
    parse_instance_text(text, "t.txt");
  } catch (const ParseError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return {};
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "trisdp_test_io";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_scratch(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(4.0), "4.0");
  EXPECT_EQ(format_double(-2.5e-20), "-2.5e-20");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const double x = gen::uniform(rng) * std::pow(10.0, gen::uniform(rng, -30, 30));
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(DumpJson, ShortArraysInline) {
  Json j = Json::object();
  j["a"] = Json::array({1.0, 2.5});
  j["b"] = "x";
  EXPECT_EQ(dump_json(j), "{\n  \"a\": [1.0, 2.5],\n  \"b\": \"x\"\n}\n");
  EXPECT_THROW(parse_json("{\n\"a\": ]", "f.json"), ParseError);
}

TEST(InstanceIo, IdentityExample) {
  const auto inst = parse_instance_text(kIdentity);
  EXPECT_EQ(inst.system.n, 2);
  EXPECT_EQ(inst.system.m(), 1);
  EXPECT_EQ(inst.system.quad[0], linalg::SymMatrix::identity(2));
  EXPECT_EQ(inst.system.rhs, vec({4}));
  EXPECT_FALSE(inst.objective.has_value());
}

TEST(InstanceIo, DiagnosticsNameLineAndField) {
  std::string text = kIdentity;
  text += "entry 0 0 2 1\n";
  const std::string msg = expect_parse_error(text);
  EXPECT_NE(msg.find("t.txt:8"), std::string::npos) << msg;
  EXPECT_NE(msg.find("entry.col"), std::string::npos) << msg;

  EXPECT_NE(expect_parse_error(std::string(kIdentity) + "entry 0 1 1 2\n").find("duplicate"),
            std::string::npos);
  EXPECT_NE(expect_parse_error("trisdp-instance 2\nn 1\n").find("version"), std::string::npos);
  expect_parse_error("trisdp-instance 1\nn 2\nm 1\nrhs 1 2\n");
  expect_parse_error("trisdp-instance 1\nn 2\nm 1\nrhs 1\nentry 1 0 0 1\n");
  expect_parse_error("trisdp-instance 1\nn 2\nm 1\nrhs 1\nentry 0 0 0 abc\n");
  expect_parse_error("trisdp-instance 1\nn 2\nm 1\nrhs 1\nbogus 1\n");
}

TEST(InstanceIo, RandomRoundTrip) {
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    const Index n = 1 + static_cast<Index>(rng() % 6);
    const Index m = 1 + static_cast<Index>(rng() % 4);
    chr::QuadraticSystem sys;
    sys.n = n;
    for (Index k = 0; k < m; ++k) sys.quad.push_back(gen::random_sym(n, rng, 0.5));
    sys.rhs = gen::gaussian_vector(m, rng);
    if (t % 2) {
      sys.lin = std::vector<Vector>{};
      for (Index k = 0; k < m; ++k) sys.lin->push_back(gen::gaussian_vector(n, rng));
      sys.constant = gen::gaussian_vector(m, rng);
    }
    std::optional<linalg::SymMatrix> obj;
    if (t % 3 == 0) obj = gen::random_sym(n, rng, 0.5);
    const std::string text = serialize_instance(sys, obj);
    const auto back = parse_instance_text(text);
    EXPECT_EQ(back.system.n, n);
    ASSERT_EQ(back.system.m(), m);
    for (Index k = 0; k < m; ++k) EXPECT_EQ(back.system.quad[k], sys.quad[k]);
    EXPECT_EQ(back.system.rhs, sys.rhs);
    if (sys.lin) {
      ASSERT_TRUE(back.system.lin.has_value());
      for (Index k = 0; k < m; ++k) EXPECT_EQ((*back.system.lin)[k], (*sys.lin)[k]);
      EXPECT_EQ(*back.system.constant, *sys.constant);
    }
    EXPECT_EQ(back.objective.has_value(), obj.has_value());
    if (obj) EXPECT_EQ(*back.objective, *obj);
    EXPECT_EQ(serialize_instance(back.system, back.objective), text);
  }
}

TEST(Sdpa, MinimalFile) {
  const std::string text =
      "\"one constraint\n"
      "1\n1\n2\n"
      "3\n"
      "0 1 1 1 1.0\n"
      "0 1 2 2 1.0\n"
      "1 1 1 1 1.0\n"
      "1 1 1 2 0.5\n";
  const auto p = parse_sdpa_sparse_text(text);
  EXPECT_EQ(p.system.n, 2);
  ASSERT_EQ(p.system.m(), 1);
  EXPECT_EQ(p.system.rhs, vec({3}));
  DenseMatrix a(2, 2);
  a << 1, 0.5, 0.5, 0;
  EXPECT_EQ(p.system.quad[0].to_dense(), a);
  EXPECT_EQ(p.objective, linalg::SymMatrix::identity(2));
}

TEST(Sdpa, CommentsAndSeparators) {
  const std::string text =
      "* a comment\n"
      "\"another\n"
      "1 = mDIM\n"
      "1 = nBLOCK\n"
      "{2}\n"
      "{3.0}\n"
      "0,1,1,1,1.0\n"
      "1 1 1 1 1.0\n";
  const auto p = parse_sdpa_sparse_text(text);
  EXPECT_EQ(p.system.rhs, vec({3}));
  EXPECT_EQ(p.block_sizes, std::vector<Index>{2});
}

TEST(Sdpa, TwoBlocksLaidOutDiagonally) {
  const std::string text =
      "2\n2\n2 -2\n1 2\n"
      "1 1 1 2 1.0\n"
      "1 2 1 1 3.0\n"
      "2 2 2 2 4.0\n"
      "0 1 2 2 -1.0\n";
  const auto p = parse_sdpa_sparse_text(text);
  EXPECT_EQ(p.system.n, 4);
  EXPECT_EQ(p.system.rhs, vec({1, 2}));
  const DenseMatrix a1 = p.system.quad[0].to_dense();
  EXPECT_EQ(a1(0, 1), 1.0);
  EXPECT_EQ(a1(2, 2), 3.0);
  EXPECT_EQ(p.system.quad[1].to_dense()(3, 3), 4.0);
  EXPECT_EQ(p.objective.to_dense()(1, 1), -1.0);
}

TEST(Sdpa, BlockErrorsNameTheBlock) {
  try {
    parse_sdpa_sparse_text("1\n2\n2 -2\n1\n1 2 1 2 1.0\n", "f.dat-s");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("block 2"), std::string::npos) << e.what();
    EXPECT_EQ(e.line(), 5);
  }
  EXPECT_THROW(parse_sdpa_sparse_text("1\n1\n0\n1\n"), ParseError);
  EXPECT_THROW(parse_sdpa_sparse_text("1\n1\n2\n1\n1 1 3 1 1.0\n"), ParseError);
}

TEST(GraphIo, Examples) {
  auto g = parse_graph_text("0 1\n0 2\n1 2\n");
  EXPECT_EQ(g.n, 3);
  ASSERT_EQ(g.edges.size(), 3u);
  for (const auto& e : g.edges) EXPECT_EQ(e.w, 1.0);

  g = parse_graph_text("5 2\n0 1 2.5\n3 1\n");
  EXPECT_EQ(g.n, 5);
  EXPECT_EQ(g.edges[0].w, 2.5);
  EXPECT_EQ(g.edges[1].u, 1);
  EXPECT_EQ(g.edges[1].v, 3);

  // Two ints but not a header: the edge count does not match.
  g = parse_graph_text("0 1\n1 2\n2 3\n");
  EXPECT_EQ(g.n, 4);
  EXPECT_EQ(g.edges.size(), 3u);

  EXPECT_EQ(parse_graph_text(serialize_graph(g)).edges.size(), 3u);
}

TEST(GraphIo, ErrorsCarryLineNumbers) {
  try {
    parse_graph_text("0 1\n# comment\n2 2\n", "g.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("self-loop"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_graph_text("0 1\n1 0\n"), ParseError);
  EXPECT_THROW(parse_graph_text("3 1\n0 5\n"), ParseError);
  EXPECT_THROW(parse_graph_text("0 x\n"), ParseError);
}

TEST(ResultIo, RoundTripIsLossless) {
  solver::SolveConfig cfg;
  const auto sys = chr::QuadraticSystem::homogeneous_system({linalg::SymMatrix::identity(2)},
                                                            vec({4}));
  const auto out = solver::solve_feasibility(sys, cfg);
  ASSERT_EQ(out.status, solver::Status::kFeasible);
  auto r = result_from_outcome(out, "solve-feas", ConfigEcho{1e-6, 0, 1, 2, 100});
  r.problem["kind"] = "system";
  const std::string text = serialize_result(r);
  const auto back = parse_result_text(text);
  EXPECT_EQ(serialize_result(back), text);
  ASSERT_TRUE(back.certificate.has_value());
  EXPECT_EQ(back.certificate->terms[0].point, r.certificate->terms[0].point);
  EXPECT_FALSE(back.witness.has_value());

  const auto neg = solver::solve_feasibility(
      chr::QuadraticSystem::homogeneous_system({linalg::SymMatrix::identity(1)}, vec({-1})), cfg,
      std::nullopt, 4.0);
  const auto w = result_from_outcome(neg, "solve-feas", ConfigEcho{});
  ASSERT_TRUE(w.witness.has_value());
  EXPECT_FALSE(w.certificate.has_value());
  const auto wback = parse_result_text(serialize_result(w));
  EXPECT_EQ(wback.witness->iterate, w.witness->iterate);
  EXPECT_EQ(wback.witness->rule, w.witness->rule);
}

TEST(ResultIo, MissingFieldIsNamed) {
  Json j = parse_json(R"({"format": "trisdp-result", "version": 1, "command": "x"})", "r");
  try {
    result_from_json(j, "r.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_FALSE(e.field().empty());
  }
  EXPECT_THROW(parse_status("maybe"), DataError);
  EXPECT_EQ(parse_status("radius_exceeded"), solver::Status::kRadiusExceeded);
}

TEST(Checker, FeasibleAndWitnessResultsPass) {
  const std::string inst = write_scratch("id.txt", kIdentity);
  solver::SolveConfig cfg;
  const auto parsed = parse_instance(inst);
  auto out = solver::solve_feasibility(parsed.system, cfg);
  auto r = result_from_outcome(out, "solve-feas", ConfigEcho{});
  r.problem["kind"] = "system";
  auto report = check_result(rebuild_problem(inst, r), r);
  EXPECT_TRUE(report.passed()) << report.summary();

  // One weight perturbed by 1e-2.
  auto bad = r;
  bad.certificate->terms[0].weight += 1e-2;
  report = check_result(rebuild_problem(inst, bad), bad);
  EXPECT_FALSE(report.passed());
  ASSERT_FALSE(report.failures().empty());
  EXPECT_EQ(report.failures().front(), "certificate.weight_sum");

  const std::string neg = write_scratch(
      "neg.txt", "trisdp-instance 1\nn 1\nm 1\nrhs -1\nentry 0 0 0 1\n");
  out = solver::solve_feasibility(parse_instance(neg).system, cfg, std::nullopt, 4.0);
  r = result_from_outcome(out, "solve-feas", ConfigEcho{});
  r.problem["kind"] = "system";
  report = check_result(rebuild_problem(neg, r), r);
  EXPECT_TRUE(report.passed()) << report.summary();
}
