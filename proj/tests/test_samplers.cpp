#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "cfeq/errors.hpp"
#include "cfeq/samplers.hpp"
#include "cfeq/variance.hpp"

using namespace cfeq;

namespace {

double column_mean(const SampleMatrix& x, std::size_t k) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, k);
  return s / x.rows();
}

double column_var(const SampleMatrix& x, std::size_t k) {
  const double m = column_mean(x, k);
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) s += (x(i, k) - m) * (x(i, k) - m);
  return s / (x.rows() - 1.0);
}

double correlation(const SampleMatrix& a, std::size_t ka, const SampleMatrix& b, std::size_t kb) {
  const double ma = column_mean(a, ka), mb = column_mean(b, kb);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double u = a(i, ka) - ma, v = b(i, kb) - mb;
    sab += u * v;
    saa += u * u;
    sbb += v * v;
  }
  return sab / std::sqrt(saa * sbb);
}

std::complex<double> ecf(const std::vector<std::vector<double>>& rows, const std::vector<double>& t) {
  std::complex<double> s = 0.0;
  for (const auto& r : rows) {
    double dot = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) dot += t[k] * r[k];
    s += std::polar(1.0, dot);
  }
  return s / static_cast<double>(rows.size());
}

std::vector<std::vector<double>> rows_of(const SampleMatrix& x) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < x.rows(); ++i) out.emplace_back(x.row(i).begin(), x.row(i).end());
  return out;
}

// Accept-reject from the skew-normal density 2 phi_p(x) Phi(alpha'x):
// propose N_p(0, I), accept with probability Phi(alpha'x).
std::vector<std::vector<double>> skew_normal_oracle(std::size_t p, double theta, std::size_t n,
                                                    std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u;
  const boost::math::normal_distribution<double> std_normal;
  std::vector<std::vector<double>> out;
  while (out.size() < n) {
    std::vector<double> x(p);
    double a = 0.0;
    for (double& v : x) {
      v = z(gen);
      a += theta * v;
    }
    if (u(gen) < boost::math::cdf(std_normal, a)) out.push_back(std::move(x));
  }
  return out;
}

// Accept-reject from the skew-t(1) density
// 2 t_p(x; 1) T_{1+p}(alpha'x sqrt((1 + p) / (x'x + 1))):
// propose a spherical Cauchy vector, accept with probability T_{1+p}(.).
std::vector<std::vector<double>> skew_cauchy_oracle(std::size_t p, double theta, std::size_t n,
                                                    std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::chi_squared_distribution<double> chi(1.0);
  std::uniform_real_distribution<double> u;
  const boost::math::students_t_distribution<double> t(1.0 + p);
  std::vector<std::vector<double>> out;
  while (out.size() < n) {
    const double w = std::sqrt(chi(gen));
    std::vector<double> x(p);
    double a = 0.0, q = 0.0;
    for (double& v : x) {
      v = z(gen) / w;
      a += theta * v;
      q += v * v;
    }
    if (u(gen) < boost::math::cdf(t, a * std::sqrt((1.0 + p) / (q + 1.0)))) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

TEST(RngStream, DeterministicAndDistinct) {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  const auto xa = sample_gamma_iid(2, 2.0, 1.0, 10, a);
  const auto xb = sample_gamma_iid(2, 2.0, 1.0, 10, b);
  const auto xc = sample_gamma_iid(2, 2.0, 1.0, 10, c);
  const auto xd = sample_gamma_iid(2, 2.0, 1.0, 10, d);
  EXPECT_EQ(std::vector<double>(xa.values().begin(), xa.values().end()),
            std::vector<double>(xb.values().begin(), xb.values().end()));
  EXPECT_NE(xa(0, 0), xc(0, 0));
  EXPECT_NE(xa(0, 0), xd(0, 0));
  const RngStream base(1, 0);
  EXPECT_EQ(base.substream(3).stream_id(), base.substream(3).stream_id());
  EXPECT_NE(base.substream(3).stream_id(), base.substream(4).stream_id());
  EXPECT_NE(base.substream(3).substream(0).stream_id(), base.substream(0).substream(3).stream_id());
}

TEST(Samplers, MvnMomentsAndCrossCovariance) {
  RngStream rng(1, 1);
  const std::size_t n = 20000;
  const PairedSample s = sample_mvn_cross(3, 2, 0.6, n, rng);
  const double band = 4.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(column_mean(s.x, k), 0.0, band);
  EXPECT_NEAR(correlation(s.x, 0, s.y, 0), 0.6, band);
  EXPECT_NEAR(correlation(s.x, 1, s.y, 1), 0.6, band);
  EXPECT_NEAR(correlation(s.x, 0, s.y, 1), 0.0, band);
  EXPECT_NEAR(correlation(s.x, 2, s.y, 0), 0.0, band);

  const Eigen::MatrixXd cov = cross_covariance(2, 3, 0.5);
  EXPECT_EQ(cov(0, 2), 0.5);
  EXPECT_EQ(cov(1, 3), 0.5);
  EXPECT_EQ(cov(0, 3), 0.0);
  EXPECT_EQ(cov(1, 4), 0.0);
  EXPECT_THROW((void)sample_mvn_cross(2, 2, 1.5, 10, rng), LinearAlgebraError);
}

TEST(Samplers, MvtIndependentBlocksAtZeroCorrelation) {
  RngStream rng(2, 1);
  const std::size_t n = 20000;
  const PairedSample s = sample_mvt_cross(2, 2, 0.0, 5.0, n, rng);
  const double band = 4.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) EXPECT_NEAR(correlation(s.x, a, s.y, b), 0.0, band);
  }
  // t(5) marginal variance is 5/3.
  EXPECT_NEAR(column_var(s.x, 0), 5.0 / 3.0, 0.15);
}

TEST(Samplers, MvtApproachesMvnForLargeDof) {
  RngStream rng(3, 1);
  const std::size_t n = 600;
  const PairedSample t = sample_mvt_cross(2, 2, 0.8, 1e6, n, rng);
  const PairedSample g = sample_mvn_cross(2, 2, 0.8, n, rng);
  auto joint = [](const PairedSample& s) {
    std::vector<double> v;
    for (std::size_t i = 0; i < s.x.rows(); ++i) {
      v.insert(v.end(), s.x.row(i).begin(), s.x.row(i).end());
      v.insert(v.end(), s.y.row(i).begin(), s.y.row(i).end());
    }
    return SampleMatrix(s.x.rows(), 4, std::move(v));
  };
  const double same = homogeneity_stat(energy_kernel(1.0), TwoSample(joint(t), joint(g)));
  const PairedSample heavy = sample_mvt_cross(2, 2, 0.8, 1.0, n, rng);
  const double different = homogeneity_stat(energy_kernel(1.0), TwoSample(joint(heavy), joint(g)));
  EXPECT_LT(std::fabs(same), 0.02);
  EXPECT_GT(different, 10.0 * std::fabs(same));
}

TEST(Samplers, SkewNormalMoments) {
  RngStream rng(4, 1);
  const std::size_t n = 40000;
  const SampleMatrix x = sample_skew_normal(2, 3.0, n, rng);
  const double delta_star = 3.0 / std::sqrt(19.0);
  const double mean = delta_star * std::sqrt(2.0 / std::numbers::pi);
  const double band = 4.0 / std::sqrt(static_cast<double>(n));
  EXPECT_NEAR(column_mean(x, 0), mean, band);
  EXPECT_NEAR(column_mean(x, 1), mean, band);
  EXPECT_NEAR(column_var(x, 0), 1.0 - mean * mean, 0.03);

  RngStream rng0(4, 2);
  const SampleMatrix g = sample_skew_normal(3, 0.0, n, rng0);
  for (std::size_t k = 0; k < 3; ++k) {
    double m3 = 0.0;
    for (std::size_t i = 0; i < n; ++i) m3 += std::pow(g(i, k), 3);
    EXPECT_NEAR(m3 / n, 0.0, 8.0 * std::sqrt(15.0 / n));
    EXPECT_NEAR(column_var(g, k), 1.0, 0.05);
  }
  EXPECT_THROW((void)sample_skew_normal(2, -1.0, 10, rng), ConfigError);
}

TEST(Samplers, SkewNormalMatchesDensityOracle) {
  RngStream rng(5, 1);
  const std::size_t n = 100000;
  const auto sampled = rows_of(sample_skew_normal(2, 3.0, n, rng));
  const auto oracle = skew_normal_oracle(2, 3.0, n, 77);
  for (const std::vector<double>& t : {std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, -0.3},
                                       std::vector<double>{-0.8, 0.2}}) {
    EXPECT_LT(std::abs(ecf(sampled, t) - ecf(oracle, t)), 0.015);
  }
}

TEST(Samplers, SkewCauchyMatchesDensityOracle) {
  RngStream rng(6, 1);
  const std::size_t n = 100000;
  const auto sampled = rows_of(sample_skew_cauchy(2, 3.0, n, rng));
  const auto oracle = skew_cauchy_oracle(2, 3.0, n, 78);
  for (const std::vector<double>& t : {std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, -0.3},
                                       std::vector<double>{0.2, 0.9}}) {
    EXPECT_LT(std::abs(ecf(sampled, t) - ecf(oracle, t)), 0.015);
  }
}

TEST(Samplers, SkewCauchyShapes) {
  RngStream rng(7, 1);
  const SampleMatrix x = sample_skew_cauchy(2, 0.0, 20001, rng);
  std::vector<double> col(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) col[i] = x(i, 0);
  std::nth_element(col.begin(), col.begin() + 10000, col.end());
  EXPECT_NEAR(col[10000], 0.0, 0.05);

  // Heavy tails: the running second moment keeps growing.
  RngStream heavy(7, 2);
  const SampleMatrix h = sample_skew_cauchy(1, 3.0, 200000, heavy);
  double small = 0.0, large = 0.0;
  for (std::size_t i = 0; i < 2000; ++i) small = std::max(small, h(i, 0) * h(i, 0));
  for (std::size_t i = 0; i < h.rows(); ++i) large = std::max(large, h(i, 0) * h(i, 0));
  EXPECT_GT(large, small);
}

TEST(Samplers, GammaMoments) {
  RngStream rng(8, 1);
  const std::size_t n = 50000;
  const SampleMatrix x = sample_gamma_iid(2, 5.0, 2.0, n, rng);
  EXPECT_NEAR(column_mean(x, 0), 10.0, 4.0 * std::sqrt(20.0 / n));
  EXPECT_NEAR(column_var(x, 1), 20.0, 0.8);
  EXPECT_THROW((void)sample_gamma_iid(2, 0.0, 1.0, 10, rng), ConfigError);
}

TEST(Samplers, MixtureMean) {
  RngStream rng(9, 1);
  const std::size_t n = 40000;
  const SampleMatrix x = sample_gauss_mixture_shift({2.0, -1.0}, n, rng);
  const double band = 4.0 * std::sqrt(2.0 / n);
  EXPECT_NEAR(column_mean(x, 0), 1.0, band);
  EXPECT_NEAR(column_mean(x, 1), -0.5, band);
  const SampleMatrix z = sample_gauss_mixture_shift({0.0, 0.0}, n, rng);
  EXPECT_NEAR(column_var(z, 0), 1.0, 0.04);
}

TEST(Benchmarks, DispatchAndValidation) {
  RngStream rng(10, 1);
  EXPECT_EQ(hypothesis_of(BenchmarkSpec{SkewCauchySpec{}}), Hypothesis::Symmetry);
  EXPECT_EQ(hypothesis_of(BenchmarkSpec{GammaScaleSpec{}}), Hypothesis::Homogeneity);
  EXPECT_EQ(hypothesis_of(BenchmarkSpec{MvtCrossSpec{}}), Hypothesis::Independence);
  const TestData d = draw_benchmark(GaussShiftSpec{3, 1.0}, 50, rng);
  const auto& ts = std::get<TwoSample>(d);
  EXPECT_EQ(ts.x.cols(), 3u);
  EXPECT_NEAR(column_mean(ts.y, 0) - column_mean(ts.x, 0), 1.0, 0.8);
  const TestData e = draw_benchmark(MvnCrossSpec{2, 3, 0.5}, 20, rng);
  EXPECT_EQ(std::get<PairedSample>(e).y.cols(), 3u);
  EXPECT_THROW(validate(BenchmarkSpec{MvnCrossSpec{2, 2, 1.0}}), LinearAlgebraError);
  EXPECT_THROW(validate(BenchmarkSpec{GammaScaleSpec{2, 5.0, -1.0}}), ConfigError);
  EXPECT_THROW(validate(BenchmarkSpec{GaussShiftSpec{0, 1.0}}), ConfigError);
  EXPECT_EQ(describe(BenchmarkSpec{GaussShiftSpec{2, 2.0}}), "gauss-shift(p=2, mu=2)");
  EXPECT_THROW((void)draw_benchmark(GaussShiftSpec{2, 1.0}, 1, rng), InsufficientSampleError);
}
