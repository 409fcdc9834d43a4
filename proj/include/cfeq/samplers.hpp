#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "cfeq/decision.hpp"
#include "cfeq/sample.hpp"

namespace cfeq {

/// A reproducible random stream identified by (seed, stream_id). The engine
/// is seeded through std::seed_seq from both words, so a stream is a plain
/// value that can be copied to another thread; substreams give trial-level
/// streams such as (seed, experiment, trial).
class RngStream {
 public:
  using Engine = std::mt19937_64;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Deterministic child stream; distinct ids give distinct streams.
  [[nodiscard]] RngStream substream(std::uint64_t id) const;

  [[nodiscard]] Engine& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  Engine engine_;
};

/// Block covariance [[I_p, S0], [S0^T, I_q]] with S0(i, j) = rho * [i == j].
[[nodiscard]] Eigen::MatrixXd cross_covariance(std::size_t p, std::size_t q, double rho);

/// n rows of N_p(mean, cov). Throws LinearAlgebraError when cov is not
/// positive definite.
[[nodiscard]] SampleMatrix sample_mvn(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                      std::size_t n, RngStream& rng);

/// Azzalini skew-normal SN_p(0, I_p, alpha) with slant alpha = theta * 1_p,
/// drawn as delta |Z0| + Z, delta = alpha / sqrt(1 + alpha'alpha),
/// Z ~ N_p(0, I - delta delta').
[[nodiscard]] SampleMatrix sample_skew_normal(std::size_t p, double theta, std::size_t n,
                                              RngStream& rng);

/// Skew-Cauchy (skew-t with one degree of freedom): S / sqrt(V) with
/// S ~ SN_p(0, I_p, theta 1_p) and V ~ chi^2_1.
[[nodiscard]] SampleMatrix sample_skew_cauchy(std::size_t p, double theta, std::size_t n,
                                              RngStream& rng);

/// n x p iid Gamma(shape, scale).
[[nodiscard]] SampleMatrix sample_gamma_iid(std::size_t p, double shape, double scale,
                                            std::size_t n, RngStream& rng);

/// Z ~ N_{p+q}(0, cross_covariance(p, q, rho)), split into (x, y).
[[nodiscard]] PairedSample sample_mvn_cross(std::size_t p, std::size_t q, double rho,
                                            std::size_t n, RngStream& rng);

/// Z = G / sqrt(V / nu), G ~ N_{p+q}(0, cross_covariance(p, q, rho)),
/// V ~ chi^2_nu, split into (x, y).
[[nodiscard]] PairedSample sample_mvt_cross(std::size_t p, std::size_t q, double rho, double nu,
                                            std::size_t n, RngStream& rng);

/// Equal mixture of N_p(0, I) and N_p(delta, I).
[[nodiscard]] SampleMatrix sample_gauss_mixture_shift(const std::vector<double>& delta,
                                                      std::size_t n, RngStream& rng);

// Benchmark scenarios.
struct SkewNormalSpec {
  std::size_t p = 2;
  double theta = 3.0;
};
struct SkewCauchySpec {
  std::size_t p = 2;
  double theta = 3.0;
};
/// X ~ N_p(0, I), Y ~ N_p(mu 1_p, I).
struct GaussShiftSpec {
  std::size_t p = 2;
  double mu = 2.0;
};
/// X iid Gamma(shape, 1), Y iid Gamma(shape, scale).
struct GammaScaleSpec {
  std::size_t p = 2;
  double shape = 5.0;
  double scale = 2.0;
};
struct MvnCrossSpec {
  std::size_t p = 2;
  std::size_t q = 2;
  double rho = 0.8;
};
struct MvtCrossSpec {
  std::size_t p = 2;
  std::size_t q = 2;
  double rho = 0.8;
  double nu = 5.0;
};
struct GaussMixtureShiftSpec {
  std::vector<double> delta;
};

using BenchmarkSpec = std::variant<SkewNormalSpec, SkewCauchySpec, GaussShiftSpec, GammaScaleSpec,
                                   MvnCrossSpec, MvtCrossSpec, GaussMixtureShiftSpec>;

/// Throws ConfigError / LinearAlgebraError on invalid parameters.
void validate(const BenchmarkSpec& spec);
[[nodiscard]] Hypothesis hypothesis_of(const BenchmarkSpec& spec);
[[nodiscard]] std::string describe(const BenchmarkSpec& spec);
/// One dataset of n observations from the scenario.
[[nodiscard]] TestData draw_benchmark(const BenchmarkSpec& spec, std::size_t n, RngStream& rng);

}  // namespace cfeq
