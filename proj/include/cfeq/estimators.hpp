#pragma once

#include <span>
#include <vector>

#include "cfeq/kernels.hpp"
#include "cfeq/sample.hpp"

namespace cfeq {

/// The four U-statistics behind the independence distance and
/// stat = u1 + u2 * u3 - 2 * u4.
struct IndependenceComponents {
  double u1 = 0.0;  ///< mean over i != j of Cp(x_i - x_j) Cq(y_i - y_j)
  double u2 = 0.0;  ///< mean over i != j of Cp(x_i - x_j)
  double u3 = 0.0;  ///< mean over i != j of Cq(y_i - y_j)
  double u4 = 0.0;  ///< mean over distinct i, j, k of Cp(x_i - x_j) Cq(y_i - y_k)
  double stat = 0.0;

  [[nodiscard]] static IndependenceComponents from(double u1, double u2, double u3, double u4) {
    return {u1, u2, u3, u4, u1 + u2 * u3 - 2.0 * u4};
  }
};

/// Unbiased estimate of the symmetry distance,
///   1 / (2 n (n-1)) * sum_{i != j} [C(x_i - x_j) - C(x_i + x_j)].
/// May be negative in finite samples. Requires n >= 2.
[[nodiscard]] double symmetry_stat(const KernelSpec& spec, const SampleMatrix& x);

/// Unbiased estimate of the two-sample distance,
///   1 / (n (n-1)) * sum_{i != j} [C(x_i - x_j) + C(y_i - y_j) - 2 C(x_i - y_j)].
[[nodiscard]] double homogeneity_stat(const KernelSpec& spec, const TwoSample& s);

/// Independence distance as a function of four U-statistics, O(n^2).
/// Requires n >= 3.
[[nodiscard]] IndependenceComponents independence_stat(const KernelSpec& spec_p,
                                                       const KernelSpec& spec_q,
                                                       const PairedSample& s);

/// Same contract as independence_stat, by explicit loops over all
/// pairwise-distinct triples. O(n^3); meant as a cross-check.
[[nodiscard]] IndependenceComponents independence_stat_bruteforce(const KernelSpec& spec_p,
                                                                  const KernelSpec& spec_q,
                                                                  const PairedSample& s);

// Batched forms: one pass over the pairwise norms, one result per kernel.
[[nodiscard]] std::vector<double> symmetry_stat(std::span<const KernelSpec> specs,
                                                const SampleMatrix& x);
[[nodiscard]] std::vector<double> homogeneity_stat(std::span<const KernelSpec> specs,
                                                   const TwoSample& s);

}  // namespace cfeq
