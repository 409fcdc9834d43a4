#pragma once

// Shared pair sweeps behind the estimators and the variance estimators.

#include <cstddef>
#include <span>
#include <vector>

#include "cfeq/kernels.hpp"
#include "cfeq/sample.hpp"

namespace cfeq::detail {

/// Pairwise sum of a sequence; the reduction tree depends only on its length.
[[nodiscard]] double pairwise_sum(std::span<const double> v);

/// Sums of a symmetric degree-2 kernel psi over i != j.
struct Degree2Sums {
  std::vector<double> row_sums;  ///< r_i = sum_{j != i} psi_ij
  double total = 0.0;            ///< sum_i r_i
  double total_sq = 0.0;         ///< sum_{i != j} psi_ij^2
  std::size_t n = 0;

  [[nodiscard]] double statistic() const;
  /// Quadratic-form variance estimate before clamping; needs n >= 3.
  [[nodiscard]] double raw_variance() const;
};

[[nodiscard]] std::vector<Degree2Sums> symmetry_sweep(std::span<const KernelSpec> specs,
                                                      const SampleMatrix& x);
[[nodiscard]] std::vector<Degree2Sums> homogeneity_sweep(std::span<const KernelSpec> specs,
                                                         const SampleMatrix& x,
                                                         const SampleMatrix& y);

/// Row sums of the two Gram matrices A = Cp(x_i - x_j), B = Cq(y_i - y_j)
/// (zero diagonals) and of their Hadamard product.
struct IndependenceSums {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
  std::vector<double> b_times_a;  ///< (B a)_m, filled when requested
  std::vector<double> a_times_b;  ///< (A b)_m, filled when requested
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double t4 = 0.0;  ///< sum over distinct triples of A_ij B_ik
  std::size_t n = 0;
};

[[nodiscard]] IndependenceSums independence_sweep(const KernelSpec& spec_p,
                                                  const KernelSpec& spec_q,
                                                  const SampleMatrix& x, const SampleMatrix& y,
                                                  bool with_cross_products);

}  // namespace cfeq::detail
