#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfeq/decision.hpp"
#include "cfeq/kernels.hpp"
#include "cfeq/samplers.hpp"
#include "cfeq/thresholds.hpp"

namespace cfeq {

/// The six simulation scenarios: skew-normal / skew-Cauchy symmetry,
/// Gaussian shift / Gamma scale homogeneity, Gaussian / t(5) independence.
enum class Example { E1a, E1b, E2a, E2b, E3a, E3b };

[[nodiscard]] std::string_view to_string(Example e);
[[nodiscard]] Example parse_example(std::string_view name);
[[nodiscard]] Hypothesis hypothesis_of(Example e);

/// Benchmark law of an example at parameter value `param` (theta, mu or rho).
/// q is ignored outside the independence examples.
[[nodiscard]] BenchmarkSpec example_benchmark(Example e, std::size_t p, std::size_t q,
                                              double param);

struct KernelGrid {
  KernelFamily family = KernelFamily::Stable;
  std::vector<double> gammas;
  double scale = 1.0;
};

struct ExperimentConfig {
  Example example = Example::E2a;
  std::vector<KernelGrid> kernels;
  std::vector<std::size_t> n{100, 200, 300};
  std::vector<std::size_t> p{2, 4, 6};
  /// Independence examples only; empty means q = p.
  std::vector<std::size_t> q;
  std::size_t trials = 2000;
  double alpha = 0.05;
  double benchmark = 2.0;  ///< theta0 / mu0 / rho0
  std::vector<double> grid;
  std::size_t b = 5000;
  std::uint64_t seed = 1;
  ThresholdMethod threshold_method = ThresholdMethod::RandomApprox;
  /// Worker threads; 0 takes CFEQ_JOBS from the environment, then the core count.
  std::size_t jobs = 0;

  /// Example defaults: stable gamma {0.5, 1, 1.5, 2} and Laplace gamma
  /// {0.1, 0.25, 1, 4}; theta0 = 3 over {5, 4, 3, 2, 1, 0}, mu0 = 2 over
  /// {2.2, ..., 1.7}, rho0 = 0.8 over {0.84, 0.82, 0.8, 0.75, 0.7, 0.65}.
  [[nodiscard]] static ExperimentConfig defaults(Example e);

  /// Throws ConfigError on empty grids, trials == 0, bad alpha, B below the
  /// harness minimum of 1000, or a quadrature threshold outside E2a.
  void validate() const;

  [[nodiscard]] std::vector<KernelSpec> kernel_specs() const;
  [[nodiscard]] std::vector<std::size_t> q_values(std::size_t p) const;
};

/// Reads the JSON config format documented in the README. Missing keys keep
/// the example defaults; unknown keys are a ConfigError.
[[nodiscard]] ExperimentConfig parse_experiment_config(std::string_view json_text);

inline constexpr std::size_t kMinHarnessB = 1000;

struct ExperimentRecord {
  Example example = Example::E2a;
  KernelSpec kernel;
  std::size_t n = 0;
  std::size_t p = 0;
  std::optional<std::size_t> q;
  double param = 0.0;
  double delta = 0.0;
  ThresholdMethod threshold_method = ThresholdMethod::RandomApprox;
  std::size_t rejections = 0;
  std::size_t trials = 0;
  double rejection_rate = 0.0;
  double mean_statistic = 0.0;
  double mean_sigma = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::string> error;  ///< set when the cell was aborted
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ExperimentRecord> records;
};

/// Runs every grid cell: one threshold per (kernel, p, q), then `trials`
/// datasets per (n, p, q, param), each tested under every kernel. Trial t of
/// a cell draws from its own stream, so results do not depend on `jobs`.
/// Records are ordered kernel, n, p, q, param.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& cfg);

[[nodiscard]] std::size_t resolve_jobs(std::size_t requested);

}  // namespace cfeq
