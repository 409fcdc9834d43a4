#pragma once

#include <span>
#include <vector>

#include "cfeq/estimators.hpp"

namespace cfeq {

/// Statistic and limit-variance estimate from one sweep over the pairs.
/// `variance` is `raw_variance` clamped at zero.
struct DistanceMoments {
  double statistic = 0.0;
  double variance = 0.0;
  double raw_variance = 0.0;
  std::size_t n = 0;

  [[nodiscard]] bool clamped() const noexcept { return raw_variance < 0.0; }
};

struct IndependenceMoments {
  IndependenceComponents components;
  double variance = 0.0;  ///< jackknife estimate of the limit variance
  std::size_t n = 0;
};

/// 4/(n(n-1)(n-2)) sum_{i,j,k distinct} psi(x_i,x_j) psi(x_i,x_k)
///   - 4 [1/(n(n-1)) sum_{i != j} psi(x_i,x_j)]^2
/// with psi(x, x1) = [C(x - x1) - C(x + x1)] / 2, clamped at 0. n >= 3.
[[nodiscard]] double symmetry_var(const KernelSpec& spec, const SampleMatrix& x);

/// Same quadratic form with the two-sample kernel
/// psi(z, z1) = C(x - x1) + C(y - y1) - C(x - y1) - C(x1 - y). n >= 3.
[[nodiscard]] double homogeneity_var(const KernelSpec& spec, const TwoSample& s);

/// (n-1) sum_i (h_(-i) - mean h)^2 over the leave-one-out independence
/// statistics, all n of them obtained in O(n^2) by downdating row sums.
/// n >= 4.
[[nodiscard]] double independence_var_jackknife(const KernelSpec& spec_p,
                                                const KernelSpec& spec_q,
                                                const PairedSample& s);

[[nodiscard]] DistanceMoments symmetry_moments(const KernelSpec& spec, const SampleMatrix& x);
[[nodiscard]] DistanceMoments homogeneity_moments(const KernelSpec& spec, const TwoSample& s);
[[nodiscard]] IndependenceMoments independence_moments(const KernelSpec& spec_p,
                                                       const KernelSpec& spec_q,
                                                       const PairedSample& s);

[[nodiscard]] std::vector<DistanceMoments> symmetry_moments(std::span<const KernelSpec> specs,
                                                            const SampleMatrix& x);
[[nodiscard]] std::vector<DistanceMoments> homogeneity_moments(std::span<const KernelSpec> specs,
                                                               const TwoSample& s);

}  // namespace cfeq
