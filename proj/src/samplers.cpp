#include "cfeq/samplers.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <boost/random/chi_squared_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "cfeq/errors.hpp"

namespace cfeq {
namespace {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream::Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return RngStream::Engine(seq);
}

void require_rows(std::size_t n) {
  if (n < 2) throw InsufficientSampleError("samplers draw at least two observations");
}

void require_dim(std::size_t p) {
  if (p < 1) throw ConfigError("dimension must be at least 1");
}

// Rows of N(0, L L^T) written into `out` (row-major n x d).
void correlated_normals(const Eigen::MatrixXd& chol_lower, std::size_t n, RngStream& rng,
                        std::vector<double>& out) {
  const auto d = static_cast<std::size_t>(chol_lower.rows());
  boost::random::normal_distribution<double> normal;
  Eigen::VectorXd w(static_cast<Eigen::Index>(d));
  out.resize(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) w[static_cast<Eigen::Index>(k)] = normal(rng.engine());
    const Eigen::VectorXd z = chol_lower * w;
    for (std::size_t k = 0; k < d; ++k) out[i * d + k] = z[static_cast<Eigen::Index>(k)];
  }
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) {
    throw ShapeError("covariance must be a nonempty square matrix");
  }
  if (!cov.allFinite()) throw InputDomainError("covariance has non-finite entries");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw LinearAlgebraError("covariance matrix is not positive definite");
  }
  return llt.matrixL();
}

std::vector<double> skew_normal_values(std::size_t p, double theta, std::size_t n,
                                       RngStream& rng) {
  require_dim(p);
  if (!std::isfinite(theta) || theta < 0.0) throw ConfigError("skewness theta must be >= 0");
  const double pd = static_cast<double>(p);
  const double delta = theta / std::sqrt(1.0 + pd * theta * theta);
  const auto dim = static_cast<Eigen::Index>(p);
  const Eigen::VectorXd dvec = Eigen::VectorXd::Constant(dim, delta);
  const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(dim, dim) - dvec * dvec.transpose();
  const Eigen::MatrixXd chol = cholesky_lower(cov);

  boost::random::normal_distribution<double> normal;
  std::vector<double> out(n * p);
  Eigen::VectorXd w(dim);
  for (std::size_t i = 0; i < n; ++i) {
    const double z0 = std::fabs(normal(rng.engine()));
    for (Eigen::Index k = 0; k < dim; ++k) w[k] = normal(rng.engine());
    const Eigen::VectorXd z = chol * w;
    for (std::size_t k = 0; k < p; ++k) out[i * p + k] = delta * z0 + z[static_cast<Eigen::Index>(k)];
  }
  return out;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

RngStream RngStream::substream(std::uint64_t id) const {
  return {seed_, mix64(stream_id_ ^ mix64(id + 0x632be59bd9b4e019ULL))};
}

Eigen::MatrixXd cross_covariance(std::size_t p, std::size_t q, double rho) {
  require_dim(p);
  require_dim(q);
  if (!std::isfinite(rho)) throw ConfigError("rho must be finite");
  const auto d = static_cast<Eigen::Index>(p + q);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(d, d);
  for (std::size_t i = 0; i < std::min(p, q); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const auto c = static_cast<Eigen::Index>(p + i);
    cov(r, c) = rho;
    cov(c, r) = rho;
  }
  return cov;
}

SampleMatrix sample_mvn(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov, std::size_t n,
                        RngStream& rng) {
  require_rows(n);
  if (mean.size() != cov.rows()) throw ShapeError("mean and covariance dimensions differ");
  const Eigen::MatrixXd chol = cholesky_lower(cov);
  std::vector<double> v;
  correlated_normals(chol, n, rng, v);
  const auto d = static_cast<std::size_t>(mean.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) v[i * d + k] += mean[static_cast<Eigen::Index>(k)];
  }
  return {n, d, std::move(v)};
}

SampleMatrix sample_skew_normal(std::size_t p, double theta, std::size_t n, RngStream& rng) {
  require_rows(n);
  return {n, p, skew_normal_values(p, theta, n, rng)};
}

SampleMatrix sample_skew_cauchy(std::size_t p, double theta, std::size_t n, RngStream& rng) {
  require_rows(n);
  std::vector<double> v = skew_normal_values(p, theta, n, rng);
  boost::random::chi_squared_distribution<double> chi2(1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double w = chi2(rng.engine());
    // chi^2_1 underflows to 0 with negligible probability; redraw to keep rows finite.
    while (!(w > 0.0)) w = chi2(rng.engine());
    const double f = 1.0 / std::sqrt(w);
    for (std::size_t k = 0; k < p; ++k) v[i * p + k] *= f;
  }
  return {n, p, std::move(v)};
}

SampleMatrix sample_gamma_iid(std::size_t p, double shape, double scale, std::size_t n,
                              RngStream& rng) {
  require_rows(n);
  require_dim(p);
  if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
    throw ConfigError("gamma shape and scale must be positive");
  }
  boost::random::gamma_distribution<double> gamma(shape, scale);
  std::vector<double> v(n * p);
  for (double& e : v) e = gamma(rng.engine());
  return {n, p, std::move(v)};
}

PairedSample sample_mvn_cross(std::size_t p, std::size_t q, double rho, std::size_t n,
                              RngStream& rng) {
  const Eigen::MatrixXd cov = cross_covariance(p, q, rho);
  const SampleMatrix z =
      sample_mvn(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p + q)), cov, n, rng);
  return PairedSample::split(z, p);
}

PairedSample sample_mvt_cross(std::size_t p, std::size_t q, double rho, double nu, std::size_t n,
                              RngStream& rng) {
  require_rows(n);
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("degrees of freedom must be positive");
  const Eigen::MatrixXd chol = cholesky_lower(cross_covariance(p, q, rho));
  std::vector<double> v;
  correlated_normals(chol, n, rng, v);
  boost::random::chi_squared_distribution<double> chi2(nu);
  const std::size_t d = p + q;
  for (std::size_t i = 0; i < n; ++i) {
    double w = chi2(rng.engine());
    while (!(w > 0.0)) w = chi2(rng.engine());
    const double f = 1.0 / std::sqrt(w / nu);
    for (std::size_t k = 0; k < d; ++k) v[i * d + k] *= f;
  }
  return PairedSample::split(SampleMatrix(n, d, std::move(v)), p);
}

SampleMatrix sample_gauss_mixture_shift(const std::vector<double>& delta, std::size_t n,
                                        RngStream& rng) {
  require_rows(n);
  const std::size_t p = delta.size();
  require_dim(p);
  boost::random::normal_distribution<double> normal;
  boost::random::uniform_01<double> unif;
  std::vector<double> v(n * p);
  for (std::size_t i = 0; i < n; ++i) {
    const bool shifted = unif(rng.engine()) < 0.5;
    for (std::size_t k = 0; k < p; ++k) {
      v[i * p + k] = normal(rng.engine()) + (shifted ? delta[k] : 0.0);
    }
  }
  return {n, p, std::move(v)};
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

SampleMatrix standard_normal(std::size_t p, double shift, std::size_t n, RngStream& rng) {
  boost::random::normal_distribution<double> normal;
  std::vector<double> v(n * p);
  for (double& e : v) e = normal(rng.engine()) + shift;
  return {n, p, std::move(v)};
}

}  // namespace

void validate(const BenchmarkSpec& spec) {
  std::visit(Overloaded{
                 [](const SkewNormalSpec& s) {
                   require_dim(s.p);
                   if (!(s.theta >= 0.0) || !std::isfinite(s.theta)) {
                     throw ConfigError("theta must be >= 0");
                   }
                 },
                 [](const SkewCauchySpec& s) {
                   require_dim(s.p);
                   if (!(s.theta >= 0.0) || !std::isfinite(s.theta)) {
                     throw ConfigError("theta must be >= 0");
                   }
                 },
                 [](const GaussShiftSpec& s) {
                   require_dim(s.p);
                   if (!std::isfinite(s.mu)) throw ConfigError("mu must be finite");
                 },
                 [](const GammaScaleSpec& s) {
                   require_dim(s.p);
                   if (!(s.shape > 0.0) || !(s.scale > 0.0) || !std::isfinite(s.shape) ||
                       !std::isfinite(s.scale)) {
                     throw ConfigError("gamma shape and scale must be positive");
                   }
                 },
                 [](const MvnCrossSpec& s) { (void)cholesky_lower(cross_covariance(s.p, s.q, s.rho)); },
                 [](const MvtCrossSpec& s) {
                   if (!(s.nu > 0.0)) throw ConfigError("degrees of freedom must be positive");
                   (void)cholesky_lower(cross_covariance(s.p, s.q, s.rho));
                 },
                 [](const GaussMixtureShiftSpec& s) {
                   require_dim(s.delta.size());
                   for (double d : s.delta) {
                     if (!std::isfinite(d)) throw ConfigError("mixture shift must be finite");
                   }
                 },
             },
             spec);
}

Hypothesis hypothesis_of(const BenchmarkSpec& spec) {
  return std::visit(Overloaded{
                        [](const SkewNormalSpec&) { return Hypothesis::Symmetry; },
                        [](const SkewCauchySpec&) { return Hypothesis::Symmetry; },
                        [](const GaussMixtureShiftSpec&) { return Hypothesis::Symmetry; },
                        [](const GaussShiftSpec&) { return Hypothesis::Homogeneity; },
                        [](const GammaScaleSpec&) { return Hypothesis::Homogeneity; },
                        [](const MvnCrossSpec&) { return Hypothesis::Independence; },
                        [](const MvtCrossSpec&) { return Hypothesis::Independence; },
                    },
                    spec);
}

std::string describe(const BenchmarkSpec& spec) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const SkewNormalSpec& s) { os << "skew-normal(p=" << s.p << ", theta=" << s.theta << ')'; },
                 [&](const SkewCauchySpec& s) { os << "skew-cauchy(p=" << s.p << ", theta=" << s.theta << ')'; },
                 [&](const GaussShiftSpec& s) { os << "gauss-shift(p=" << s.p << ", mu=" << s.mu << ')'; },
                 [&](const GammaScaleSpec& s) {
                   os << "gamma-scale(p=" << s.p << ", shape=" << s.shape << ", scale=" << s.scale << ')';
                 },
                 [&](const MvnCrossSpec& s) {
                   os << "mvn-cross(p=" << s.p << ", q=" << s.q << ", rho=" << s.rho << ')';
                 },
                 [&](const MvtCrossSpec& s) {
                   os << "mvt-cross(p=" << s.p << ", q=" << s.q << ", rho=" << s.rho << ", nu=" << s.nu << ')';
                 },
                 [&](const GaussMixtureShiftSpec& s) { os << "gauss-mixture(p=" << s.delta.size() << ')'; },
             },
             spec);
  return os.str();
}

TestData draw_benchmark(const BenchmarkSpec& spec, std::size_t n, RngStream& rng) {
  validate(spec);
  return std::visit(
      Overloaded{
          [&](const SkewNormalSpec& s) -> TestData { return sample_skew_normal(s.p, s.theta, n, rng); },
          [&](const SkewCauchySpec& s) -> TestData { return sample_skew_cauchy(s.p, s.theta, n, rng); },
          [&](const GaussShiftSpec& s) -> TestData {
            require_rows(n);
            SampleMatrix x = standard_normal(s.p, 0.0, n, rng);
            SampleMatrix y = standard_normal(s.p, s.mu, n, rng);
            return TwoSample(std::move(x), std::move(y));
          },
          [&](const GammaScaleSpec& s) -> TestData {
            SampleMatrix x = sample_gamma_iid(s.p, s.shape, 1.0, n, rng);
            SampleMatrix y = sample_gamma_iid(s.p, s.shape, s.scale, n, rng);
            return TwoSample(std::move(x), std::move(y));
          },
          [&](const MvnCrossSpec& s) -> TestData { return sample_mvn_cross(s.p, s.q, s.rho, n, rng); },
          [&](const MvtCrossSpec& s) -> TestData {
            return sample_mvt_cross(s.p, s.q, s.rho, s.nu, n, rng);
          },
          [&](const GaussMixtureShiftSpec& s) -> TestData {
            return sample_gauss_mixture_shift(s.delta, n, rng);
          },
      },
      spec);
}

}  // namespace cfeq
