#include "cfeq/thresholds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cfeq/errors.hpp"
#include "cfeq/quadrature.hpp"
#include "cfeq/variance.hpp"

namespace cfeq {
namespace {

// Stream id reserved for benchmark samples drawn by the random approximation.
constexpr std::uint64_t kRandomApproxStream = 0x5241'0000'0000'0001ULL;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

ThresholdResult random_approx_result(double statistic, double variance, std::size_t b,
                                     std::optional<std::uint64_t> seed) {
  ThresholdResult r;
  r.delta = statistic;
  r.method = ThresholdMethod::RandomApprox;
  r.b_used = b;
  r.estimated_error = std::sqrt(std::max(variance, 0.0) / static_cast<double>(b));
  r.seed = seed;
  r.negative_warning = statistic < 0.0;
  return r;
}

ThresholdResult from_data(Hypothesis hypothesis, const std::vector<KernelSpec>& kernels,
                          const TestData& data, std::optional<std::uint64_t> seed) {
  if (kernels.empty()) throw ConfigError("at least one kernel is required");
  switch (hypothesis) {
    case Hypothesis::Symmetry: {
      const auto* x = std::get_if<SampleMatrix>(&data);
      if (x == nullptr) throw ShapeError("symmetry threshold needs a single sample");
      const DistanceMoments m = symmetry_moments(kernels[0], *x);
      return random_approx_result(m.statistic, m.variance, x->rows(), seed);
    }
    case Hypothesis::Homogeneity: {
      const auto* s = std::get_if<TwoSample>(&data);
      if (s == nullptr) throw ShapeError("homogeneity threshold needs two samples");
      const DistanceMoments m = homogeneity_moments(kernels[0], *s);
      return random_approx_result(m.statistic, m.variance, s->x.rows(), seed);
    }
    case Hypothesis::Independence: {
      const auto* s = std::get_if<PairedSample>(&data);
      if (s == nullptr) throw ShapeError("independence threshold needs a paired sample");
      const KernelSpec& kq = kernels.size() > 1 ? kernels[1] : kernels[0];
      const IndependenceMoments m = independence_moments(kernels[0], kq, *s);
      return random_approx_result(m.components.stat, m.variance, s->x.rows(), seed);
    }
  }
  throw ConfigError("unknown hypothesis");
}

TestData draw_random_approx_sample(const BenchmarkSpec& benchmark, std::size_t b,
                                   std::uint64_t seed) {
  if (b < kMinRandomApproxSize) {
    throw ConfigError("random approximation needs B >= " + std::to_string(kMinRandomApproxSize));
  }
  RngStream rng(seed, kRandomApproxStream);
  return draw_benchmark(benchmark, b, rng);
}

// log of the chi density with k degrees of freedom at r > 0.
double log_chi_density(double r, int k) {
  const double half_k = 0.5 * k;
  return (k - 1) * std::log(r) - 0.5 * r * r - (half_k - 1.0) * std::numbers::ln2 -
         std::lgamma(half_k);
}

// E C(W) with |W|^2 = 2 R^2 and R chi with k degrees of freedom.
QuadratureResult radial_expectation(const KernelSpec& spec, int k, double tol) {
  const double upper = std::sqrt(static_cast<double>(k)) + 16.0;
  auto integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    return eval_kernel_radial(spec, 2.0 * r * r) * std::exp(log_chi_density(r, k));
  };
  std::ostringstream what;
  what << "radial expectation of " << spec.label() << " with " << k << " degrees of freedom";
  return integrate(integrand, 0.0, upper, tol, what.str());
}

}  // namespace

std::string_view to_string(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::RandomApprox:
      return "RandomApprox";
    case ThresholdMethod::Quadrature:
      return "Quadrature";
    case ThresholdMethod::ClosedForm:
      return "ClosedForm";
  }
  return "?";
}

ThresholdMethod parse_threshold_method(std::string_view name) {
  const std::string s = lower(name);
  if (s == "ra" || s == "random-approx" || s == "randomapprox") return ThresholdMethod::RandomApprox;
  if (s == "quad" || s == "quadrature") return ThresholdMethod::Quadrature;
  if (s == "closed-form" || s == "closedform") return ThresholdMethod::ClosedForm;
  throw ConfigError("unknown threshold method '" + std::string(name) + "'");
}

ThresholdProvenance provenance_of(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::RandomApprox:
      return ThresholdProvenance::RandomApprox;
    case ThresholdMethod::Quadrature:
      return ThresholdProvenance::Quadrature;
    case ThresholdMethod::ClosedForm:
      return ThresholdProvenance::ClosedForm;
  }
  return ThresholdProvenance::UserSupplied;
}

ThresholdResult threshold_random_approx(const BenchmarkSpec& benchmark,
                                        const std::vector<KernelSpec>& kernels, std::size_t b,
                                        std::uint64_t seed) {
  for (const KernelSpec& k : kernels) k.validate();
  const TestData data = draw_random_approx_sample(benchmark, b, seed);
  return from_data(hypothesis_of(benchmark), kernels, data, seed);
}

std::vector<ThresholdResult> threshold_random_approx(const BenchmarkSpec& benchmark,
                                                     std::span<const KernelSpec> specs,
                                                     std::size_t b, std::uint64_t seed) {
  for (const KernelSpec& k : specs) k.validate();
  const TestData data = draw_random_approx_sample(benchmark, b, seed);
  std::vector<ThresholdResult> out;
  out.reserve(specs.size());
  switch (hypothesis_of(benchmark)) {
    case Hypothesis::Symmetry:
      for (const DistanceMoments& m : symmetry_moments(specs, std::get<SampleMatrix>(data))) {
        out.push_back(random_approx_result(m.statistic, m.variance, b, seed));
      }
      break;
    case Hypothesis::Homogeneity:
      for (const DistanceMoments& m : homogeneity_moments(specs, std::get<TwoSample>(data))) {
        out.push_back(random_approx_result(m.statistic, m.variance, b, seed));
      }
      break;
    case Hypothesis::Independence:
      for (const KernelSpec& k : specs) {
        out.push_back(from_data(Hypothesis::Independence, {k}, data, seed));
      }
      break;
  }
  return out;
}

ThresholdResult threshold_from_sample(Hypothesis hypothesis, const std::vector<KernelSpec>& kernels,
                                      const TestData& data) {
  for (const KernelSpec& k : kernels) k.validate();
  return from_data(hypothesis, kernels, data, std::nullopt);
}

ThresholdResult threshold_gaussian_shift_quadrature(const KernelSpec& spec, std::size_t p,
                                                    double mu0) {
  spec.validate();
  if (spec.family == KernelFamily::Energy) {
    throw UnsupportedKernelError("gauss-shift quadrature supports the stable and laplace kernels");
  }
  if (p < 1) throw ConfigError("dimension must be at least 1");
  if (!std::isfinite(mu0)) throw ConfigError("mu0 must be finite");

  constexpr double kRadialTol = 1e-10;
  constexpr double kTailMass = 1e-12;
  const int dof = static_cast<int>(p);

  const QuadratureResult central = radial_expectation(spec, dof, kRadialTol);
  double error = 2.0 * central.error;

  // |W'|^2 / 2 is noncentral chi-square with noncentrality p mu0^2 / 2:
  // a Poisson(p mu0^2 / 4) mixture of central chi-squares with p + 2j dof.
  const double mean = static_cast<double>(p) * mu0 * mu0 / 4.0;
  double shifted = 0.0;
  if (mean == 0.0) {
    shifted = central.value;
  } else {
    double mass = 0.0;
    for (int j = 0;; ++j) {
      const double weight = std::exp(j * std::log(mean) - mean - std::lgamma(j + 1.0));
      if (weight > 0.0) {
        const QuadratureResult e = radial_expectation(spec, dof + 2 * j, kRadialTol);
        shifted += weight * e.value;
        error += 2.0 * weight * e.error;
      }
      mass += weight;
      if (j > mean && 1.0 - mass <= kTailMass) break;
      if (j > 100000) throw NumericalError("Poisson mixture did not reach its tail bound");
    }
    // |C| <= 1 for these kernels, so the dropped mass bounds the truncation.
    error += 2.0 * std::max(0.0, 1.0 - mass);
  }

  ThresholdResult r;
  r.delta = 2.0 * central.value - 2.0 * shifted;
  r.method = ThresholdMethod::Quadrature;
  r.estimated_error = error;
  return r;
}

double closed_form_independence_gauss(double rho) {
  if (!(std::fabs(rho) < 1.0)) throw InputDomainError("rho must lie in (-1, 1)");
  const double r2 = rho * rho;
  return std::numbers::pi * (0.5 + 1.0 / std::sqrt(4.0 - r2) - 4.0 / std::sqrt(16.0 - r2));
}

double closed_form_symmetry_mixture(std::size_t p, double delta_norm) {
  if (p < 1) throw ConfigError("dimension must be at least 1");
  if (!(delta_norm >= 0.0)) throw InputDomainError("shift norm must be nonnegative");
  const double half_p = 0.5 * static_cast<double>(p);
  return std::pow(std::numbers::pi, half_p) / std::pow(2.0, half_p + 3.0) *
         -std::expm1(-0.5 * delta_norm * delta_norm);
}

double closed_form_homogeneity_mixture(std::size_t p, double delta_norm) {
  if (p < 1) throw ConfigError("dimension must be at least 1");
  if (!(delta_norm >= 0.0)) throw InputDomainError("shift norm must be nonnegative");
  const double half_p = 0.5 * static_cast<double>(p);
  return std::pow(std::numbers::pi, half_p) / std::pow(2.0, half_p + 1.0) *
         -std::expm1(-delta_norm * delta_norm / 8.0);
}

double independence_gauss_quadrature(double rho, double tol) {
  if (!(std::fabs(rho) < 1.0)) throw InputDomainError("rho must lie in (-1, 1)");
  auto integrand = [rho](double t1, double t2) {
    const double joint = std::exp(-0.5 * (t1 * t1 + 2.0 * rho * t1 * t2 + t2 * t2));
    const double product = std::exp(-0.5 * (t1 * t1 + t2 * t2));
    const double d = joint - product;
    return d * d * std::exp(-t1 * t1 - t2 * t2);
  };
  return integrate_2d(integrand, -12.0, 12.0, -12.0, 12.0, tol, "independence CF distance").value;
}

double ecf_distance_integral(const SampleMatrix& x, const SampleMatrix& y, const KernelSpec& spec,
                             double tol) {
  spec.validate();
  if (x.cols() != 1 || y.cols() != 1) throw ShapeError("the CF quadrature oracle is univariate");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  const bool gaussian = spec.family == KernelFamily::Stable && spec.gamma == 2.0;
  const bool cauchy = spec.family == KernelFamily::Stable && spec.gamma == 1.0;
  if (!gaussian && !cauchy) {
    throw UnsupportedKernelError("no weight density available for kernel " + spec.label());
  }
  const double s = spec.scale;
  const std::span<const double> xv = x.values();
  const std::span<const double> yv = y.values();
  const double nx = static_cast<double>(xv.size());
  const double ny = static_cast<double>(yv.size());

  // |ecf_x - ecf_y|^2 is a constant plus cosines at the nonzero pairwise
  // differences. Split the constant off so the remainder decays against w.
  double constant = 0.0;
  std::vector<std::pair<double, double>> cosines;  // (frequency, coefficient)
  double inverse_square_freq = 0.0;                // sum |coef| / frequency^2
  auto scan = [&](std::span<const double> a, std::span<const double> b, double coef) {
    for (double u : a) {
      for (double v : b) {
        const double d = std::fabs(u - v);
        if (d == 0.0) {
          constant += coef;
        } else {
          cosines.emplace_back(d, coef);
          inverse_square_freq += std::fabs(coef) / (d * d);
        }
      }
    }
  };
  scan(xv, xv, 1.0 / (nx * nx));
  scan(yv, yv, 1.0 / (ny * ny));
  scan(xv, yv, -2.0 / (nx * ny));

  auto density = [&](double t) {
    if (gaussian) {
      return std::exp(-t * t / (4.0 * s * s)) / (2.0 * std::sqrt(std::numbers::pi) * s);
    }
    return s / (std::numbers::pi * (s * s + t * t));
  };
  auto ecf_gap = [&](double t) {
    double cx = 0.0, sx = 0.0, cy = 0.0, sy = 0.0;
    for (double u : xv) {
      cx += std::cos(t * u);
      sx += std::sin(t * u);
    }
    for (double v : yv) {
      cy += std::cos(t * v);
      sy += std::sin(t * v);
    }
    const double dc = cx / nx - cy / ny;
    const double ds = sx / nx - sy / ny;
    return dc * dc + ds * ds;
  };

  // Gaussian weight: truncate where the density is negligible. Cauchy weight:
  // integrating cos(b t) w(t) over [T, inf) by parts twice gives
  // -sin(bT) w(T) / b - cos(bT) w'(T) / b^2 plus a remainder below
  // |w'(T)| / b^2, and |w'(T)| <= 2 s / (pi T^3). T is chosen so that the
  // remainders over both tails stay below tol / 2.
  double limit = 40.0 * s;
  if (!gaussian) {
    limit = std::cbrt(8.0 * s * inverse_square_freq / (std::numbers::pi * 0.5 * tol));
    limit = std::ceil(std::max(limit, s));
  }
  if (limit > 5e6) {
    throw NumericalError("ECF quadrature would need more than 5e6 panels (near-tied samples)");
  }
  double tail = 0.0;
  if (!gaussian) {
    const double w = density(limit);
    const double dw = -2.0 * s * limit / (std::numbers::pi * std::pow(s * s + limit * limit, 2));
    for (const auto& [d, coef] : cosines) {
      tail += coef * (-std::sin(d * limit) * w / d - std::cos(d * limit) * dw / (d * d));
    }
  }

  // Panels span a fixed number of periods of the fastest cosine, which the
  // 61-point rule resolves to roundoff.
  double top_freq = 0.0;
  for (const auto& cosine : cosines) top_freq = std::max(top_freq, cosine.first);
  const double width = std::max(1.0, 40.0 / std::max(top_freq, 1e-300));
  const auto panels = static_cast<std::size_t>(std::ceil(limit / width));
  const double panel_tol = 0.25 * tol / static_cast<double>(panels);
  double total = tail;
  auto integrand = [&](double t) { return (ecf_gap(t) - constant) * density(t); };
  // The integrand is at most (4 + |constant|) w(a) on a panel starting at a,
  // so a relative tolerance scaled by that bound meets panel_tol without
  // chasing roundoff in the far tail.
  const double envelope = 4.0 + std::fabs(constant);
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = static_cast<double>(k) * width;
    const double b = std::min(a + width, limit);
    const double rel = std::clamp(panel_tol / (envelope * width * density(a)), 1e-12, 1e-3);
    total += integrate(integrand, a, b, panel_tol, "ECF distance panel", rel).value;
  }
  // Even integrand; the constant integrates against a unit-mass density.
  return 2.0 * total + constant;
}

double ecf_distance_quadrature(const SampleMatrix& x, const SampleMatrix& y,
                               const KernelSpec& spec, double tol) {
  if (x.rows() != y.rows()) throw ShapeError("the diagonal correction needs equal sample sizes");
  const double v = ecf_distance_integral(x, y, spec, tol);
  const std::size_t n = x.rows();
  const double nd = static_cast<double>(n);
  double paired = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    paired += eval_kernel_radial(spec, (x(i, 0) - y(i, 0)) * (x(i, 0) - y(i, 0)));
  }
  const double c0 = eval_kernel_radial(spec, 0.0);
  return (nd * nd * v - 2.0 * nd * c0 + 2.0 * paired) / (nd * (nd - 1.0));
}

}  // namespace cfeq
