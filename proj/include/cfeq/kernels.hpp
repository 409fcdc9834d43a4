#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "cfeq/sample.hpp"

namespace cfeq {

enum class KernelFamily { Stable, Laplace, Energy };

[[nodiscard]] std::string_view to_string(KernelFamily family);
/// Accepts "stable", "laplace", "energy" (case-insensitive).
[[nodiscard]] KernelFamily parse_kernel_family(std::string_view name);

/// Weight kernel C(u) evaluated at scale * u.
///
///   Stable:  exp(-(scale |u|)^gamma),        0 < gamma <= 2
///   Laplace: (1 + scale^2 |u|^2)^(-gamma),   gamma > 0
///   Energy:  -(scale |u|)^gamma,             0 < gamma <= 2
///
/// Stable and Laplace are characteristic functions of spherical weight
/// densities. Energy is the moment-based substitute; it needs finite
/// 2*gamma moments of the data and gamma = 2 lies outside its
/// characterization (allowed, but reported).
struct KernelSpec {
  KernelFamily family = KernelFamily::Stable;
  double gamma = 1.0;
  double scale = 1.0;

  /// Throws ConfigError when the parameters are outside the family's range.
  void validate() const;

  [[nodiscard]] bool is_characteristic_function() const noexcept {
    return family != KernelFamily::Energy;
  }
  [[nodiscard]] bool requires_moment_conditions() const noexcept {
    return family == KernelFamily::Energy;
  }
  [[nodiscard]] bool energy_gamma_excluded() const noexcept {
    return family == KernelFamily::Energy && gamma == 2.0;
  }
  [[nodiscard]] std::string label() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

[[nodiscard]] KernelSpec stable_kernel(double gamma, double scale = 1.0);
[[nodiscard]] KernelSpec laplace_kernel(double gamma, double scale = 1.0);
[[nodiscard]] KernelSpec energy_kernel(double gamma, double scale = 1.0);

/// C(scale * u). Throws InputDomainError on non-finite entries.
[[nodiscard]] double eval_kernel(const KernelSpec& spec, std::span<const double> u);

/// C as a function of the squared Euclidean norm |u|^2 (unscaled).
[[nodiscard]] double eval_kernel_radial(const KernelSpec& spec, double squared_norm);

/// Vectorized form of eval_kernel_radial: out[j] = C(sqrt(squared_norms[j])).
/// Results agree with the scalar path to a few ulp.
void eval_kernel_radial(const KernelSpec& spec, std::span<const double> squared_norms,
                        std::span<double> out);

using Matrix = Eigen::MatrixXd;

/// Pairwise kernel evaluations over one sample.
struct GramPair {
  Matrix diff;                ///< C(x_i - x_j)
  std::optional<Matrix> sum;  ///< C(x_i + x_j), when requested
  KernelSpec kernel;
};

/// diff only; only the upper triangle is computed, then mirrored.
[[nodiscard]] GramPair gram_diff(const KernelSpec& spec, const SampleMatrix& x);
/// C(x_i + x_j); the diagonal holds C(2 x_i).
[[nodiscard]] Matrix gram_sum(const KernelSpec& spec, const SampleMatrix& x);
/// diff and sum together.
[[nodiscard]] GramPair gram_pair(const KernelSpec& spec, const SampleMatrix& x);
/// C(x_i - y_j) for two samples with equal column counts; not symmetric.
[[nodiscard]] Matrix gram_cross(const KernelSpec& spec, const SampleMatrix& x,
                                const SampleMatrix& y);

}  // namespace cfeq
