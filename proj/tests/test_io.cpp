#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include <json.hpp>

#include "cfeq/errors.hpp"
#include "cfeq/io.hpp"

using namespace cfeq;

TEST(Csv, ParsesNumericRows) {
  const SampleMatrix x = parse_sample_csv("1,2\n3.5,-4e-1\n 5 , 6\n");
  EXPECT_EQ(x.rows(), 3u);
  EXPECT_EQ(x.cols(), 2u);
  EXPECT_EQ(x(1, 1), -0.4);
  EXPECT_EQ(x(2, 0), 5.0);
}

TEST(Csv, SkipsHeaderAndBlankLines) {
  const SampleMatrix x = parse_sample_csv("a,b\r\n1,2\r\n\r\n3,4\r\n5,6\r\n");
  EXPECT_EQ(x.rows(), 3u);
  EXPECT_EQ(x(0, 0), 1.0);
}

TEST(Csv, ErrorsNameLineAndColumn) {
  try {
    (void)parse_sample_csv("1,2\n3,NaN\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2, column 2"), std::string::npos) << e.what();
  }
  try {
    (void)parse_sample_csv("x,y\n1,2\n3,abc\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3, column 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW((void)parse_sample_csv("1,2\n3\n"), DataError);
  EXPECT_THROW((void)parse_sample_csv("1,2\n"), DataError);
  EXPECT_THROW((void)parse_sample_csv(""), DataError);
  EXPECT_THROW((void)parse_sample_csv("1,2\n3,4\n", 3), DataError);
  EXPECT_THROW((void)read_sample_csv("/nonexistent/file.csv"), DataError);
}

namespace {

ExperimentResult one_cell(std::size_t rejections, std::size_t trials) {
  ExperimentResult r;
  ExperimentRecord rec;
  rec.example = Example::E2a;
  rec.kernel = stable_kernel(1.0);
  rec.n = 200;
  rec.p = 2;
  rec.param = 1.7;
  rec.delta = 0.315284;
  rec.rejections = rejections;
  rec.trials = trials;
  rec.rejection_rate = static_cast<double>(rejections) / trials;
  rec.seed = 3;
  r.records.push_back(rec);
  return r;
}

}  // namespace

TEST(ResultsCsv, Format) {
  EXPECT_EQ(format_results_csv(one_cell(161, 200)),
            "example,family,gamma,n,p,q,param,delta,rejection_rate,trials,seed\n"
            "E2a,stable,1.000000,200,2,,1.700000,0.315284,0.805000,200,3\n");
  EXPECT_NE(format_results_csv(one_cell(0, 200)).find(",0,200,3\n"), std::string::npos);
  EXPECT_NE(format_results_csv(one_cell(200, 200)).find(",1,200,3\n"), std::string::npos);
}

TEST(ResultsCsv, WriteAndFailure) {
  const auto path = std::filesystem::temp_directory_path() / "cfeq_results_test.csv";
  write_results_csv(one_cell(5, 10), path.string());
  EXPECT_EQ(read_text_file(path.string()), format_results_csv(one_cell(5, 10)));
  std::filesystem::remove(path);
  EXPECT_THROW(write_results_csv(one_cell(5, 10), "/nonexistent/dir/out.csv"), DataError);
}

TEST(Json, ReportAndThreshold) {
  TestReport r;
  r.hypothesis = Hypothesis::Homogeneity;
  r.kernels = {laplace_kernel(0.25)};
  r.statistic = 0.1;
  r.reject_null = true;
  r.threshold_provenance = ThresholdProvenance::RandomApprox;
  const auto j = nlohmann::json::parse(report_to_json(r));
  EXPECT_EQ(j["hypothesis"], "Homogeneity");
  EXPECT_EQ(j["kernels"][0]["family"], "laplace");
  EXPECT_EQ(j["reject_null"], true);
  EXPECT_EQ(j["threshold_provenance"], "RandomApprox");

  ThresholdResult t;
  t.delta = 0.3;
  t.method = ThresholdMethod::Quadrature;
  t.estimated_error = 1e-12;
  const auto k = nlohmann::json::parse(threshold_to_json(t));
  EXPECT_EQ(k["method"], "Quadrature");
  EXPECT_TRUE(k["b_used"].is_null());
  EXPECT_EQ(k["delta"], 0.3);
}
