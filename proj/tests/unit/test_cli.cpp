#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "trisdp/io/commands.hpp"
#include "trisdp/io/json_text.hpp"
#include "trisdp/io/result_io.hpp"

using namespace trisdp;
using namespace trisdp::io;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "trisdp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("trisdp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

const char* kCircle =
    "trisdp-instance 1\nn 2\nm 1\nrhs 4\nentry 0 0 0 1\nentry 0 1 1 1\n";
const char* kNegative = "trisdp-instance 1\nn 1\nm 1\nrhs -1\nentry 0 0 0 1\n";

}  // namespace

TEST_F(CliTest, SolveFeasWritesResultAndSummary) {
  const auto inst = file("c.txt", kCircle);
  const auto r = cli({"solve-feas", inst, "--eps", "1e-6"});
  EXPECT_EQ(r.code, kExitFeasible) << r.err;
  const auto res = parse_result_text(r.out);
  EXPECT_EQ(res.status, solver::Status::kFeasible);
  EXPECT_LE(res.residual, 1e-6);
  EXPECT_TRUE(res.certificate.has_value());
  EXPECT_NE(r.err.find("solve-feas: feasible"), std::string::npos) << r.err;
}

TEST_F(CliTest, WitnessExitCodeAndCheck) {
  const auto inst = file("neg.txt", kNegative);
  const auto out = path("neg.json");
  const auto r = cli({"solve-feas", inst, "--rmax", "4", "--out", out});
  EXPECT_EQ(r.code, kExitWitness) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto c = cli({"check-cert", inst, out});
  EXPECT_EQ(c.code, kExitFeasible) << c.err;
  const Json report = parse_json(c.out, "report");
  EXPECT_EQ(report["format"], "trisdp-check");
  EXPECT_TRUE(report["passed"].get<bool>());
}

TEST_F(CliTest, CheckCertFailsOnTamperedResult) {
  const auto inst = file("c.txt", kCircle);
  const auto r = cli({"solve-feas", inst});
  ASSERT_EQ(r.code, kExitFeasible);
  auto res = parse_result_text(r.out);
  res.certificate->terms[0].point *= 1.01;
  const auto bad = file("bad.json", serialize_result(res));
  const auto c = cli({"check-cert", inst, bad});
  EXPECT_EQ(c.code, kExitWitness);
  EXPECT_NE(c.err.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, SameSeedSameBytes) {
  const auto inst = file("c.txt", kCircle);
  const auto a = cli({"solve-feas", inst, "--seed", "7"});
  const auto b = cli({"solve-feas", inst, "--seed", "7"});
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"solve-feas"}).code, kExitUsage);
  EXPECT_EQ(cli({"no-such-command"}).code, kExitUsage);
  const auto inst = file("c.txt", kCircle);
  EXPECT_EQ(cli({"solve-feas", inst, "--eps", "-1"}).code, kExitUsage);
  EXPECT_EQ(cli({"solve-feas", inst, "--eps", "abc"}).code, kExitUsage);
  EXPECT_EQ(cli({"binary-feas", inst}).code, kExitUsage);
  EXPECT_EQ(cli({"bench", "binary-feas", "--n", "1"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliTest, DataErrors) {
  EXPECT_EQ(cli({"solve-feas", path("missing.txt")}).code, kExitData);
  const auto bad = file("bad.txt", "trisdp-instance 1\nn 2\nm 1\nrhs 1\nentry 0 0 5 1\n");
  const auto r = cli({"solve-feas", bad});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find(":5:"), std::string::npos) << r.err;
  const auto graph = file("g.txt", "0 0\n");
  EXPECT_EQ(cli({"maxcut", graph}).code, kExitData);
  // A non-PSD matrix is rejected by convex-qp.
  const auto nonpsd = file("q.txt", "trisdp-instance 1\nn 1\nm 1\nrhs 1\nentry 0 0 0 -1\n");
  EXPECT_EQ(cli({"convex-qp", nonpsd}).code, kExitData);
}

TEST_F(CliTest, MaxcutOnTriangle) {
  const auto g = file("k3.txt", "0 1\n0 2\n1 2\n");
  const auto out = path("k3.json");
  const auto r = cli({"maxcut", g, "--trials", "200", "--eps", "1e-4", "--out", out});
  EXPECT_EQ(r.code, kExitFeasible) << r.err;
  const auto res = parse_result(out);
  EXPECT_EQ(res.extra["cut_value"].get<double>(), 2.0);
  EXPECT_NEAR(res.extra["sdp_value"].get<double>(), 2.25, 1e-3);
  EXPECT_EQ(cli({"check-cert", g, out}).code, kExitFeasible);
}

TEST_F(CliTest, SolveOptFromSdpa) {
  // max x11 subject to x11 + x22 = 1: value 1.
  const auto f = file("p.dat-s", "1\n1\n2\n1\n0 1 1 1 1.0\n1 1 1 1 1.0\n1 1 2 2 1.0\n");
  const auto out = path("p.json");
  const auto r = cli({"solve-opt", f, "--r", "1.5", "--eps", "1e-4", "--out", out});
  EXPECT_EQ(r.code, kExitFeasible) << r.err;
  const auto res = parse_result(out);
  EXPECT_NEAR(res.extra["value"].get<double>(), 1.0, 1e-3);
  const auto c = cli({"check-cert", f, out});
  EXPECT_EQ(c.code, kExitFeasible) << c.err;
}

TEST_F(CliTest, BinaryFeasAndConvexQp) {
  const auto a = file("a.txt", "trisdp-instance 1\nn 2\nm 1\nrhs 0\nentry 0 0 1 1\n");
  auto out = path("b.json");
  auto r = cli({"binary-feas", a, "--alpha", "2", "--out", out});
  EXPECT_EQ(r.code, kExitFeasible) << r.err;
  EXPECT_EQ(cli({"check-cert", a, out}).code, kExitFeasible);

  const auto q = file("q.txt", "trisdp-instance 1\nn 1\nm 1\nrhs 4\nentry 0 0 0 1\n");
  out = path("q.json");
  r = cli({"convex-qp", q, "--out", out});
  EXPECT_EQ(r.code, kExitFeasible) << r.err;
  EXPECT_EQ(parse_result(out).extra["x"].size(), 1u);
  EXPECT_EQ(cli({"check-cert", q, out}).code, kExitFeasible);
}

TEST_F(CliTest, BenchEmitsInstanceAndTrace) {
  const auto inst = path("bench.txt");
  const auto trace = path("trace.csv");
  const auto out = path("bench.json");
  const auto r = cli({"bench", "binary-feas", "--n", "30", "--density", "0.2", "--seed", "3",
                      "--emit-instance", inst, "--trace", trace, "--out", out});
  EXPECT_EQ(r.code, kExitFeasible) << r.err;
  EXPECT_TRUE(std::filesystem::exists(inst));
  std::ifstream t(trace);
  std::string header;
  std::getline(t, header);
  EXPECT_EQ(header, "iteration,radius,gap,lambda,action");
  const auto res = parse_result(out);
  EXPECT_EQ(res.extra["bench"]["n"].get<int>(), 30);
  EXPECT_EQ(cli({"check-cert", inst, out}).code, kExitFeasible);
}
