#include <gtest/gtest.h>

#include <cmath>

#include "cfeq/errors.hpp"
#include "cfeq/experiment.hpp"
#include "cfeq/io.hpp"

using namespace cfeq;

namespace {

ExperimentConfig small_config(Example e) {
  ExperimentConfig cfg = ExperimentConfig::defaults(e);
  cfg.kernels = {{KernelFamily::Stable, {1.0}, 1.0}, {KernelFamily::Laplace, {1.0}, 1.0}};
  cfg.n = {30};
  cfg.p = {2};
  cfg.trials = 24;
  cfg.b = 1000;
  cfg.grid = {cfg.grid.front(), cfg.grid.back()};
  cfg.seed = 5;
  cfg.jobs = 1;
  return cfg;
}

}  // namespace

TEST(ExperimentConfig, DefaultsPerExample) {
  const ExperimentConfig s = ExperimentConfig::defaults(Example::E1b);
  EXPECT_EQ(s.benchmark, 3.0);
  EXPECT_EQ(s.grid, (std::vector<double>{5, 4, 3, 2, 1, 0}));
  EXPECT_EQ(s.trials, 2000u);
  EXPECT_EQ(s.b, 5000u);
  EXPECT_EQ(s.alpha, 0.05);
  EXPECT_EQ(s.kernel_specs().size(), 8u);
  const ExperimentConfig h = ExperimentConfig::defaults(Example::E2b);
  EXPECT_EQ(h.benchmark, 2.0);
  EXPECT_EQ(h.grid.front(), 2.2);
  const ExperimentConfig i = ExperimentConfig::defaults(Example::E3a);
  EXPECT_EQ(i.benchmark, 0.8);
  EXPECT_EQ(i.grid.front(), 0.84);
  EXPECT_EQ(i.q_values(4), (std::vector<std::size_t>{4}));
  EXPECT_EQ(h.q_values(4), (std::vector<std::size_t>{0}));
}

TEST(ExperimentConfig, ParseJson) {
  const ExperimentConfig cfg = parse_experiment_config(R"({
    "example": "E3b", "kernels": [{"family": "energy", "gamma": [1.0, 1.5]}],
    "n": 50, "p": [2, 3], "q": [1], "trials": 10, "grid": [0.8, 0.5],
    "B": 1000, "seed": 99, "threshold_method": "ra", "jobs": 2})");
  EXPECT_EQ(cfg.example, Example::E3b);
  EXPECT_EQ(cfg.kernel_specs().size(), 2u);
  EXPECT_EQ(cfg.kernel_specs()[1], energy_kernel(1.5));
  EXPECT_EQ(cfg.n, (std::vector<std::size_t>{50}));
  EXPECT_EQ(cfg.q_values(2), (std::vector<std::size_t>{1}));
  EXPECT_EQ(cfg.benchmark, 0.8);
  EXPECT_EQ(cfg.seed, 99u);
  EXPECT_EQ(cfg.jobs, 2u);

  EXPECT_THROW((void)parse_experiment_config(R"({"exampel": "E1a"})"), ConfigError);
  EXPECT_THROW((void)parse_experiment_config(R"({"example": "E4"})"), ConfigError);
  EXPECT_THROW((void)parse_experiment_config(R"({"trials": 0})"), ConfigError);
  EXPECT_THROW((void)parse_experiment_config(R"({"B": 500})"), ConfigError);
  EXPECT_THROW((void)parse_experiment_config(R"({"grid": []})"), ConfigError);
  EXPECT_THROW((void)parse_experiment_config(R"({"n": "many"})"), ConfigError);
  EXPECT_THROW((void)parse_experiment_config("{"), ConfigError);
  EXPECT_THROW((void)parse_experiment_config(R"({"example": "E1a", "threshold_method": "quad"})"),
               ConfigError);
  EXPECT_NO_THROW((void)parse_experiment_config(R"({"example": "E2a", "threshold_method": "quad"})"));
}

TEST(Experiment, RecordCountAndRates) {
  const ExperimentConfig cfg = small_config(Example::E2a);
  const ExperimentResult r = run_experiment(cfg);
  ASSERT_EQ(r.records.size(), 2u * 1u * 1u * 2u);
  for (const ExperimentRecord& rec : r.records) {
    EXPECT_FALSE(rec.error.has_value());
    EXPECT_EQ(rec.trials, 24u);
    EXPECT_EQ(rec.rejection_rate, rec.rejections / 24.0);
    EXPECT_GT(rec.delta, 0.0);
    EXPECT_GT(rec.mean_sigma, 0.0);
  }
  EXPECT_EQ(r.records[0].kernel, stable_kernel(1.0));
  EXPECT_EQ(r.records[0].param, 2.2);
  EXPECT_EQ(r.records[1].param, 1.7);
  EXPECT_EQ(r.records[2].kernel, laplace_kernel(1.0));
  // Far on the null side nothing is declared equivalent; far on the alternative side more is.
  EXPECT_LE(r.records[0].rejection_rate, r.records[1].rejection_rate);
}

TEST(Experiment, ResultsDoNotDependOnJobs) {
  for (Example e : {Example::E1a, Example::E2b, Example::E3a}) {
    ExperimentConfig cfg = small_config(e);
    const ExperimentResult one = run_experiment(cfg);
    cfg.jobs = 3;
    const ExperimentResult three = run_experiment(cfg);
    ASSERT_EQ(one.records.size(), three.records.size());
    for (std::size_t i = 0; i < one.records.size(); ++i) {
      EXPECT_EQ(one.records[i].rejections, three.records[i].rejections);
      EXPECT_EQ(one.records[i].mean_statistic, three.records[i].mean_statistic);
      EXPECT_EQ(one.records[i].mean_sigma, three.records[i].mean_sigma);
      EXPECT_EQ(one.records[i].delta, three.records[i].delta);
    }
    EXPECT_EQ(format_results_csv(one), format_results_csv(three));
  }
}

TEST(Experiment, QuadratureThresholds) {
  ExperimentConfig cfg = small_config(Example::E2a);
  cfg.threshold_method = ThresholdMethod::Quadrature;
  const ExperimentResult r = run_experiment(cfg);
  EXPECT_EQ(r.records[0].delta, threshold_gaussian_shift_quadrature(stable_kernel(1.0), 2, 2.0).delta);
  EXPECT_EQ(r.records[0].threshold_method, ThresholdMethod::Quadrature);
}

TEST(Experiment, FailingCellDoesNotAbortRun) {
  ExperimentConfig cfg = small_config(Example::E3a);
  cfg.grid = {0.8, 1.2};  // rho = 1.2 is not a valid correlation
  const ExperimentResult r = run_experiment(cfg);
  ASSERT_EQ(r.records.size(), 4u);
  EXPECT_FALSE(r.records[0].error.has_value());
  ASSERT_TRUE(r.records[1].error.has_value());
  EXPECT_TRUE(std::isnan(r.records[1].rejection_rate));
  const std::string csv = format_results_csv(r);
  EXPECT_NE(csv.find(",NA,"), std::string::npos);
}

TEST(Experiment, IndependenceRecordsCarryQ) {
  ExperimentConfig cfg = small_config(Example::E3a);
  cfg.q = {1, 2};
  const ExperimentResult r = run_experiment(cfg);
  ASSERT_EQ(r.records.size(), 2u * 2u * 2u);
  EXPECT_EQ(r.records[0].q, 1u);
  EXPECT_EQ(r.records[2].q, 2u);
}

TEST(Experiment, ResolveJobs) {
  EXPECT_EQ(resolve_jobs(3), 3u);
  EXPECT_GE(resolve_jobs(0), 1u);
}
