#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cfeq/decision.hpp"
#include "cfeq/kernels.hpp"
#include "cfeq/sample.hpp"
#include "cfeq/samplers.hpp"

namespace cfeq {

enum class ThresholdMethod { RandomApprox, Quadrature, ClosedForm };

[[nodiscard]] std::string_view to_string(ThresholdMethod m);
/// Accepts "ra" / "random-approx" and "quad" / "quadrature".
[[nodiscard]] ThresholdMethod parse_threshold_method(std::string_view name);
[[nodiscard]] ThresholdProvenance provenance_of(ThresholdMethod m);

struct ThresholdResult {
  double delta = 0.0;
  ThresholdMethod method = ThresholdMethod::RandomApprox;
  std::optional<std::size_t> b_used;
  /// RandomApprox: sigma_B / sqrt(B) from the same sample.
  /// Quadrature: accumulated error bound.
  std::optional<double> estimated_error;
  std::optional<std::uint64_t> seed;
  bool negative_warning = false;  ///< RA statistic came out below zero
};

/// Smallest benchmark sample accepted by the random approximation.
inline constexpr std::size_t kMinRandomApproxSize = 100;

/// Random approximation: one benchmark sample of size b, then the matching
/// distance statistic on it. `kernels` follows run_test (independence uses
/// kernels[0] for x and kernels[1], or kernels[0], for y).
[[nodiscard]] ThresholdResult threshold_random_approx(const BenchmarkSpec& benchmark,
                                                      const std::vector<KernelSpec>& kernels,
                                                      std::size_t b, std::uint64_t seed);

/// Same benchmark sample for every kernel; for independence each kernel is
/// used on both blocks. Element i of the result belongs to specs[i] and equals
/// threshold_random_approx(benchmark, {specs[i]}, b, seed).
[[nodiscard]] std::vector<ThresholdResult> threshold_random_approx(
    const BenchmarkSpec& benchmark, std::span<const KernelSpec> specs, std::size_t b,
    std::uint64_t seed);

/// The random-approximation estimate on a sample the caller already has.
[[nodiscard]] ThresholdResult threshold_from_sample(Hypothesis hypothesis,
                                                    const std::vector<KernelSpec>& kernels,
                                                    const TestData& data);

/// Homogeneity distance between N_p(0, I) and N_p(mu0 1_p, I) for a Stable
/// or Laplace kernel, 2 E C(W) - 2 E C(W') with W ~ N_p(0, 2I) and
/// W' ~ N_p(mu0 1_p, 2I), by radial quadrature.
[[nodiscard]] ThresholdResult threshold_gaussian_shift_quadrature(const KernelSpec& spec,
                                                                  std::size_t p, double mu0);

// Closed-form distances for weights exp(-|t|^2) (unnormalized).

/// pi (1/2 + 1/sqrt(4 - rho^2) - 4/sqrt(16 - rho^2)) for a bivariate
/// standard Gaussian with correlation rho. |rho| < 1.
[[nodiscard]] double closed_form_independence_gauss(double rho);
/// Symmetry distance of (N_p(0, I) + N_p(delta, I)) / 2, |delta| = delta_norm.
[[nodiscard]] double closed_form_symmetry_mixture(std::size_t p, double delta_norm);
/// Homogeneity distance between that mixture and N_p(0, I).
[[nodiscard]] double closed_form_homogeneity_mixture(std::size_t p, double delta_norm);

/// The same bivariate Gaussian distance by 2D adaptive quadrature of
/// |phi_XY(t) - phi_X(t1) phi_Y(t2)|^2 exp(-t1^2 - t2^2).
[[nodiscard]] double independence_gauss_quadrature(double rho, double tol = 1e-9);

/// Direct integration of |ecf_x(t) - ecf_y(t)|^2 w(t) for univariate samples,
/// with w the normalized weight density whose CF is the kernel:
/// Stable gamma = 2 (Gaussian) or Stable gamma = 1 (Cauchy). Other kernels
/// throw UnsupportedKernelError. This is the V-statistic form.
[[nodiscard]] double ecf_distance_integral(const SampleMatrix& x, const SampleMatrix& y,
                                          const KernelSpec& spec, double tol = 1e-8);

/// ecf_distance_integral converted to the U-statistic scale of
/// homogeneity_stat by removing the diagonal terms.
[[nodiscard]] double ecf_distance_quadrature(const SampleMatrix& x, const SampleMatrix& y,
                                             const KernelSpec& spec, double tol = 1e-8);

}  // namespace cfeq
