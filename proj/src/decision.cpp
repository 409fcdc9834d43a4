#include "cfeq/decision.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "cfeq/errors.hpp"
#include "cfeq/variance.hpp"

namespace cfeq {

std::string_view to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::Symmetry:
      return "Symmetry";
    case Hypothesis::Homogeneity:
      return "Homogeneity";
    case Hypothesis::Independence:
      return "Independence";
  }
  return "unknown";
}

std::string_view to_string(ThresholdProvenance p) {
  switch (p) {
    case ThresholdProvenance::UserSupplied:
      return "UserSupplied";
    case ThresholdProvenance::RandomApprox:
      return "RandomApprox";
    case ThresholdProvenance::Quadrature:
      return "Quadrature";
    case ThresholdProvenance::ClosedForm:
      return "ClosedForm";
  }
  return "unknown";
}

Hypothesis parse_hypothesis(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "symmetry") return Hypothesis::Symmetry;
  if (lower == "homogeneity") return Hypothesis::Homogeneity;
  if (lower == "independence") return Hypothesis::Independence;
  throw ConfigError("unknown hypothesis '" + std::string(name) + "'");
}

void EquivalenceConfig::validate() const {
  if (!std::isfinite(delta) || delta <= 0.0) {
    throw ConfigError("equivalence margin delta must be positive and finite");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

double normal_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputDomainError("normal quantile needs 0 < alpha < 1");
  }
  const double q = alpha - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852545925 + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0.0 ? alpha : 1.0 - alpha;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

TestReport decide(double statistic, double sigma_n, std::size_t n, const EquivalenceConfig& cfg) {
  cfg.validate();
  if (n < 2) throw InsufficientSampleError("decision rule needs n >= 2");
  if (!std::isfinite(statistic)) throw InputDomainError("statistic must be finite");
  if (!std::isfinite(sigma_n) || sigma_n < 0.0) {
    throw InputDomainError("sigma_n must be finite and nonnegative");
  }
  TestReport r;
  r.statistic = statistic;
  r.sigma_n = sigma_n;
  r.n = n;
  r.delta = cfg.delta;
  r.alpha = cfg.alpha;
  r.z_alpha = normal_quantile(cfg.alpha);
  r.degenerate_variance = sigma_n == 0.0;
  r.critical_value = cfg.delta + sigma_n * r.z_alpha / std::sqrt(static_cast<double>(n));
  r.reject_null = statistic <= r.critical_value;
  return r;
}

namespace {

void annotate(TestReport& r, Hypothesis h, std::vector<KernelSpec> kernels,
              ThresholdProvenance provenance) {
  r.hypothesis = h;
  r.threshold_provenance = provenance;
  for (const auto& k : kernels) {
    r.moment_condition_caveat = r.moment_condition_caveat || k.requires_moment_conditions();
    r.energy_gamma_excluded = r.energy_gamma_excluded || k.energy_gamma_excluded();
  }
  r.kernels = std::move(kernels);
}

}  // namespace

TestReport run_symmetry_test(const KernelSpec& spec, const SampleMatrix& x,
                             const EquivalenceConfig& cfg, ThresholdProvenance provenance) {
  cfg.validate();
  const auto m = symmetry_moments(spec, x);
  TestReport r = decide(m.statistic, std::sqrt(m.variance), m.n, cfg);
  annotate(r, Hypothesis::Symmetry, {spec}, provenance);
  return r;
}

TestReport run_homogeneity_test(const KernelSpec& spec, const TwoSample& s,
                                const EquivalenceConfig& cfg, ThresholdProvenance provenance) {
  cfg.validate();
  const auto m = homogeneity_moments(spec, s);
  TestReport r = decide(m.statistic, std::sqrt(m.variance), m.n, cfg);
  annotate(r, Hypothesis::Homogeneity, {spec}, provenance);
  return r;
}

TestReport run_independence_test(const KernelSpec& spec_p, const KernelSpec& spec_q,
                                 const PairedSample& s, const EquivalenceConfig& cfg,
                                 ThresholdProvenance provenance) {
  cfg.validate();
  const auto m = independence_moments(spec_p, spec_q, s);
  TestReport r = decide(m.components.stat, std::sqrt(m.variance), m.n, cfg);
  annotate(r, Hypothesis::Independence, {spec_p, spec_q}, provenance);
  return r;
}

TestReport run_test(Hypothesis hypothesis, const std::vector<KernelSpec>& kernels,
                    const TestData& data, const EquivalenceConfig& cfg,
                    ThresholdProvenance provenance) {
  if (kernels.empty()) throw ConfigError("at least one kernel is required");
  switch (hypothesis) {
    case Hypothesis::Symmetry:
      if (const auto* x = std::get_if<SampleMatrix>(&data)) {
        return run_symmetry_test(kernels[0], *x, cfg, provenance);
      }
      throw ShapeError("symmetry test expects a single sample");
    case Hypothesis::Homogeneity:
      if (const auto* s = std::get_if<TwoSample>(&data)) {
        return run_homogeneity_test(kernels[0], *s, cfg, provenance);
      }
      throw ShapeError("homogeneity test expects two samples");
    case Hypothesis::Independence:
      if (const auto* s = std::get_if<PairedSample>(&data)) {
        const KernelSpec& q = kernels.size() > 1 ? kernels[1] : kernels[0];
        return run_independence_test(kernels[0], q, *s, cfg, provenance);
      }
      throw ShapeError("independence test expects paired samples");
  }
  throw ConfigError("unknown hypothesis");
}

}  // namespace cfeq
