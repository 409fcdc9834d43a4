#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfeq/io.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cfeq::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cfeq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const std::string p = (dir_ / name).string();
    cfeq::write_text_file(p, text);
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const char* kSample =
    "x1,x2,x3\n0.1,1.2,-0.3\n-0.7,0.4,0.9\n1.1,-0.2,0.05\n0.3,0.3,-1.4\n-1.2,0.8,0.6\n"
    "0.6,-0.9,0.2\n0.2,0.1,1.1\n-0.4,-1.3,-0.5\n";

}  // namespace

TEST(Cli, ClosedFormPrintsValues) {
  CliRun r = cli({"closed-form", "indep-gauss", "--rho", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0\n");
  r = cli({"closed-form", "sym-mixture", "--p", "1", "--delta-norm", "1.4142135623730951"});
  EXPECT_NEAR(std::stod(r.out), 0.0990307041, 1e-9);
  r = cli({"closed-form", "gauss-shift", "--p", "2", "--mu0", "2", "--gamma", "2"});
  EXPECT_NEAR(std::stod(r.out), 0.319241, 1e-6);
}

TEST(Cli, QuadratureThreshold) {
  const CliRun r = cli({"threshold", "--benchmark", "gauss-shift", "--p", "2", "--mu0", "2.0",
                     "--family", "stable", "--gamma", "1.0", "--method", "quad"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["delta"].get<double>(), 0.315284, 5e-4);
  EXPECT_EQ(j["method"], "Quadrature");
}

TEST(Cli, RandomApproxThreshold) {
  const CliRun r = cli({"threshold", "--benchmark", "skew-normal", "--p", "2", "--theta", "3",
                     "-B", "300", "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["b_used"], 300);
  EXPECT_EQ(j["seed"], 4);
  EXPECT_EQ(cli({"threshold", "--benchmark", "skew-normal", "-B", "300", "--seed", "4"}).out, r.out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"closed-form"}).code, 2);
  EXPECT_EQ(cli({"closed-form", "nonsense"}).code, 2);
  EXPECT_EQ(cli({"threshold", "--benchmark", "unknown"}).code, 2);
  EXPECT_EQ(cli({"threshold", "--benchmark", "skew-normal", "--method", "quad"}).code, 2);
  EXPECT_EQ(cli({"closed-form", "indep-gauss", "--rho", "1.5"}).code, 3);
  EXPECT_EQ(cli({"threshold", "--benchmark", "mvn-cross", "--rho", "1.5", "-B", "200"}).code, 4);
  EXPECT_EQ(cli({"test", "symmetry", "--data", "/nonexistent.csv", "--delta", "0.1"}).code, 3);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliFiles, HomogeneityWithItselfDeclaresEquivalence) {
  const std::string data = file("x.csv", kSample);
  const std::string report = path("report.json");
  const CliRun r = cli({"test", "homogeneity", "--data", data, "--data2", data, "--family", "stable",
                     "--gamma", "1", "--delta", "0.01", "--alpha", "0.05", "--out", report});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(cfeq::read_text_file(report));
  EXPECT_EQ(j["statistic"], 0.0);
  EXPECT_EQ(j["reject_null"], true);
  EXPECT_EQ(j["degenerate_variance"], true);
  EXPECT_EQ(j["n"], 8);
}

TEST_F(CliFiles, SymmetryAndIndependence) {
  const std::string data = file("x.csv", kSample);
  CliRun r = cli({"test", "symmetry", "--data", data, "--family", "laplace", "--gamma", "1",
               "--delta", "0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["hypothesis"], "Symmetry");

  r = cli({"test", "independence", "--data", data, "--split", "1", "--family", "stable",
           "--gamma", "1", "--gamma2", "0.5", "--delta", "0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["kernels"].size(), 2u);
  EXPECT_EQ(j["kernels"][1]["gamma"], 0.5);

  EXPECT_EQ(cli({"test", "independence", "--data", data, "--delta", "0.05"}).code, 2);
  EXPECT_EQ(cli({"test", "independence", "--data", data, "--split", "3", "--delta", "0.05"}).code, 3);
  EXPECT_EQ(cli({"test", "symmetry", "--data", data}).code, 2);
  EXPECT_EQ(cli({"test", "symmetry", "--data", data, "--delta", "-1"}).code, 2);
}

TEST_F(CliFiles, DeltaConfig) {
  const std::string data = file("x.csv", kSample);
  const std::string cfg = file("delta.json",
                               R"({"benchmark": "gauss-shift", "p": 3, "mu0": 2.0, "method": "quad"})");
  const CliRun r = cli({"test", "homogeneity", "--data", data, "--data2", data, "--delta-config", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["threshold_provenance"], "Quadrature");
  EXPECT_GT(j["delta"].get<double>(), 0.0);

  const std::string fixed = file("fixed.json", R"({"delta": 0.25})");
  const auto k = nlohmann::json::parse(
      cli({"test", "symmetry", "--data", data, "--delta-config", fixed}).out);
  EXPECT_EQ(k["delta"], 0.25);
  EXPECT_EQ(k["threshold_provenance"], "UserSupplied");
}

TEST_F(CliFiles, BadDataIsADataError) {
  const std::string bad = file("bad.csv", "1,2\n3,NaN\n4,5\n");
  const CliRun r = cli({"test", "symmetry", "--data", bad, "--delta", "0.1"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 2, column 2"), std::string::npos) << r.err;
}

TEST_F(CliFiles, SimulateWritesCsv) {
  const std::string cfg = file("cfg.json", R"({
    "example": "E2a", "kernels": [{"family": "stable", "gamma": 1.0}],
    "n": [20], "p": [2], "trials": 8, "grid": [2.2, 1.7], "B": 1000, "seed": 3})");
  const std::string out = path("results.csv");
  CliRun r = cli({"simulate", "--config", cfg, "--out", out, "--jobs", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string first = cfeq::read_text_file(out);
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 3);
  EXPECT_EQ(first.rfind("example,family,gamma,n,p,q,param,delta,rejection_rate,trials,seed\n", 0), 0u);

  r = cli({"simulate", "--config", cfg, "--out", out, "--jobs", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(cfeq::read_text_file(out), first);

  r = cli({"simulate", "--config", cfg, "--out", out, "--seed", "4"});
  EXPECT_NE(cfeq::read_text_file(out), first);

  const std::string bad = file("bad.json", R"({"example": "E2a", "trails": 5})");
  EXPECT_EQ(cli({"simulate", "--config", bad, "--out", out}).code, 2);
}
