#include "cfeq/variance.hpp"

#include <algorithm>
#include <string>

#include "cfeq/errors.hpp"
#include "sweeps.hpp"

namespace cfeq {
namespace {

void require_rows(std::size_t n, std::size_t minimum, const char* what) {
  if (n < minimum) {
    throw InsufficientSampleError(std::string(what) + " needs at least " +
                                  std::to_string(minimum) + " observations, got " +
                                  std::to_string(n));
  }
}

DistanceMoments to_moments(const detail::Degree2Sums& d) {
  DistanceMoments m;
  m.n = d.n;
  m.statistic = d.statistic();
  m.raw_variance = d.raw_variance();
  m.variance = std::max(0.0, m.raw_variance);
  return m;
}

std::vector<DistanceMoments> to_moments(const std::vector<detail::Degree2Sums>& sums) {
  std::vector<DistanceMoments> out;
  out.reserve(sums.size());
  for (const auto& d : sums) out.push_back(to_moments(d));
  return out;
}

double h_of(double s1, double s2, double s3, double t4, double n) {
  const double pairs = n * (n - 1.0);
  return IndependenceComponents::from(s1 / pairs, s2 / pairs, s3 / pairs, t4 / (pairs * (n - 2.0)))
      .stat;
}

}  // namespace

std::vector<DistanceMoments> symmetry_moments(std::span<const KernelSpec> specs,
                                              const SampleMatrix& x) {
  require_rows(x.rows(), 3, "symmetry variance");
  return to_moments(detail::symmetry_sweep(specs, x));
}

std::vector<DistanceMoments> homogeneity_moments(std::span<const KernelSpec> specs,
                                                 const TwoSample& s) {
  require_rows(s.x.rows(), 3, "homogeneity variance");
  return to_moments(detail::homogeneity_sweep(specs, s.x, s.y));
}

DistanceMoments symmetry_moments(const KernelSpec& spec, const SampleMatrix& x) {
  return symmetry_moments(std::span(&spec, 1), x).front();
}

DistanceMoments homogeneity_moments(const KernelSpec& spec, const TwoSample& s) {
  return homogeneity_moments(std::span(&spec, 1), s).front();
}

double symmetry_var(const KernelSpec& spec, const SampleMatrix& x) {
  return symmetry_moments(spec, x).variance;
}

double homogeneity_var(const KernelSpec& spec, const TwoSample& s) {
  return homogeneity_moments(spec, s).variance;
}

IndependenceMoments independence_moments(const KernelSpec& spec_p, const KernelSpec& spec_q,
                                         const PairedSample& s) {
  const std::size_t n = s.x.rows();
  require_rows(n, 4, "independence jackknife");
  const auto sums = detail::independence_sweep(spec_p, spec_q, s.x, s.y, true);
  const double nn = static_cast<double>(n);

  IndependenceMoments out;
  out.n = n;
  {
    const double pairs = nn * (nn - 1.0);
    out.components = IndependenceComponents::from(sums.s1 / pairs, sums.s2 / pairs,
                                                  sums.s3 / pairs, sums.t4 / (pairs * (nn - 2.0)));
  }

  // Removing observation m: every pair sum loses twice its row sum, and the
  // triple sum loses a_m b_m + (B a)_m + (A b)_m - 3 c_m.
  std::vector<double> loo(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double s1 = sums.s1 - 2.0 * sums.c[m];
    const double s2 = sums.s2 - 2.0 * sums.a[m];
    const double s3 = sums.s3 - 2.0 * sums.b[m];
    const double t4 = sums.t4 - sums.a[m] * sums.b[m] - sums.b_times_a[m] - sums.a_times_b[m] +
                      3.0 * sums.c[m];
    loo[m] = h_of(s1, s2, s3, t4, nn - 1.0);
  }
  const double mean = detail::pairwise_sum(loo) / nn;
  std::vector<double> dev(n);
  for (std::size_t m = 0; m < n; ++m) dev[m] = (loo[m] - mean) * (loo[m] - mean);
  out.variance = (nn - 1.0) * detail::pairwise_sum(dev);
  return out;
}

double independence_var_jackknife(const KernelSpec& spec_p, const KernelSpec& spec_q,
                                  const PairedSample& s) {
  return independence_moments(spec_p, spec_q, s).variance;
}

}  // namespace cfeq
