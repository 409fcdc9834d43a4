#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "cfeq/kernels.hpp"
#include "cfeq/sample.hpp"

namespace cfeq {

enum class Hypothesis { Symmetry, Homogeneity, Independence };
enum class ThresholdProvenance { UserSupplied, RandomApprox, Quadrature, ClosedForm };

[[nodiscard]] std::string_view to_string(Hypothesis h);
[[nodiscard]] std::string_view to_string(ThresholdProvenance p);
[[nodiscard]] Hypothesis parse_hypothesis(std::string_view name);

/// Equivalence margin and significance level.
struct EquivalenceConfig {
  double delta = 0.0;
  double alpha = 0.05;

  /// Throws ConfigError unless delta > 0 and 0 < alpha < 1.
  void validate() const;
};

/// Outcome of one equivalence test. `reject_null` means the data were
/// declared delta-close to the model (symmetric / homogeneous / independent).
struct TestReport {
  Hypothesis hypothesis = Hypothesis::Symmetry;
  std::vector<KernelSpec> kernels;
  double statistic = 0.0;
  double sigma_n = 0.0;
  std::size_t n = 0;
  double delta = 0.0;
  double alpha = 0.0;
  double z_alpha = 0.0;
  double critical_value = 0.0;
  bool reject_null = false;
  bool degenerate_variance = false;
  bool moment_condition_caveat = false;  ///< energy kernel: needs finite 2*gamma moments
  bool energy_gamma_excluded = false;    ///< energy kernel with gamma = 2
  ThresholdProvenance threshold_provenance = ThresholdProvenance::UserSupplied;
};

/// Inverse standard normal CDF (Wichura's AS241, PPND16; |error| < 1e-15
/// relative over the double range). Throws InputDomainError unless
/// 0 < alpha < 1.
[[nodiscard]] double normal_quantile(double alpha);

/// Critical region: statistic <= delta + sigma_n * z_alpha / sqrt(n), inclusive.
/// sigma_n == 0 flags a degenerate variance and the rule becomes statistic <= delta.
[[nodiscard]] TestReport decide(double statistic, double sigma_n, std::size_t n,
                                const EquivalenceConfig& cfg);

[[nodiscard]] TestReport run_symmetry_test(
    const KernelSpec& spec, const SampleMatrix& x, const EquivalenceConfig& cfg,
    ThresholdProvenance provenance = ThresholdProvenance::UserSupplied);

[[nodiscard]] TestReport run_homogeneity_test(
    const KernelSpec& spec, const TwoSample& s, const EquivalenceConfig& cfg,
    ThresholdProvenance provenance = ThresholdProvenance::UserSupplied);

[[nodiscard]] TestReport run_independence_test(
    const KernelSpec& spec_p, const KernelSpec& spec_q, const PairedSample& s,
    const EquivalenceConfig& cfg,
    ThresholdProvenance provenance = ThresholdProvenance::UserSupplied);

using TestData = std::variant<SampleMatrix, TwoSample, PairedSample>;

/// Dispatches on the hypothesis. Independence uses kernels[0] for x and
/// kernels[1] (or kernels[0] when absent) for y. Throws ShapeError when the
/// data variant does not match the hypothesis.
[[nodiscard]] TestReport run_test(Hypothesis hypothesis, const std::vector<KernelSpec>& kernels,
                                  const TestData& data, const EquivalenceConfig& cfg,
                                  ThresholdProvenance provenance = ThresholdProvenance::UserSupplied);

}  // namespace cfeq
