#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfeq/decision.hpp"
#include "cfeq/errors.hpp"
#include "cfeq/experiment.hpp"
#include "cfeq/io.hpp"
#include "cfeq/samplers.hpp"
#include "cfeq/thresholds.hpp"

namespace cfeq::cli {
namespace {

struct BenchmarkOptions {
  std::string name;
  std::size_t p = 2;
  std::size_t q = 0;  // 0: same as p
  double theta = 3.0;
  double mu0 = 2.0;
  double rho = 0.8;
  double nu = 5.0;
  double shape = 5.0;
  double shift = 1.0;
};

struct KernelOptions {
  std::string family = "stable";
  double gamma = 1.0;
  double scale = 1.0;
  std::string family2;
  std::optional<double> gamma2;
};

struct ThresholdOptions {
  BenchmarkOptions bench;
  std::string method = "ra";
  std::size_t b = 5000;
  std::uint64_t seed = 1;
};

BenchmarkSpec make_benchmark(const BenchmarkOptions& o) {
  const std::size_t q = o.q == 0 ? o.p : o.q;
  if (o.name == "skew-normal") return SkewNormalSpec{o.p, o.theta};
  if (o.name == "skew-cauchy") return SkewCauchySpec{o.p, o.theta};
  if (o.name == "gauss-shift") return GaussShiftSpec{o.p, o.mu0};
  if (o.name == "gamma-scale") return GammaScaleSpec{o.p, o.shape, o.mu0};
  if (o.name == "mvn-cross") return MvnCrossSpec{o.p, q, o.rho};
  if (o.name == "mvt-cross") return MvtCrossSpec{o.p, q, o.rho, o.nu};
  if (o.name == "gauss-mixture") {
    if (o.p < 1) throw ConfigError("dimension must be at least 1");
    const double each = o.shift / std::sqrt(static_cast<double>(o.p));
    return GaussMixtureShiftSpec{std::vector<double>(o.p, each)};
  }
  throw ConfigError("unknown benchmark '" + o.name + "'");
}

std::vector<KernelSpec> make_kernels(const KernelOptions& o) {
  KernelSpec first{parse_kernel_family(o.family), o.gamma, o.scale};
  first.validate();
  std::vector<KernelSpec> out{first};
  if (!o.family2.empty() || o.gamma2) {
    KernelSpec second{o.family2.empty() ? first.family : parse_kernel_family(o.family2),
                      o.gamma2.value_or(o.gamma), o.scale};
    second.validate();
    out.push_back(second);
  }
  return out;
}

ThresholdResult compute_threshold(const ThresholdOptions& o, const std::vector<KernelSpec>& kernels) {
  const BenchmarkSpec bench = make_benchmark(o.bench);
  switch (parse_threshold_method(o.method)) {
    case ThresholdMethod::RandomApprox:
      return threshold_random_approx(bench, kernels, o.b, o.seed);
    case ThresholdMethod::Quadrature:
      if (o.bench.name != "gauss-shift") {
        throw ConfigError("quadrature thresholds are available for gauss-shift only");
      }
      return threshold_gaussian_shift_quadrature(kernels.at(0), o.bench.p, o.bench.mu0);
    case ThresholdMethod::ClosedForm:
      break;
  }
  throw ConfigError("use the closed-form subcommand for closed-form distances");
}

void add_benchmark_options(CLI::App* app, BenchmarkOptions& b) {
  app->add_option("--p", b.p, "Dimension of x (default 2)");
  app->add_option("--q", b.q, "Dimension of y for the cross benchmarks (default p)");
  app->add_option("--theta", b.theta, "Skewness slant");
  app->add_option("--mu0", b.mu0, "Shift (gauss-shift) or Gamma scale (gamma-scale)");
  app->add_option("--rho", b.rho, "Cross correlation");
  app->add_option("--nu", b.nu, "Degrees of freedom (mvt-cross)");
  app->add_option("--shape", b.shape, "Gamma shape (gamma-scale)");
  app->add_option("--shift", b.shift, "Norm of the mixture shift (gauss-mixture)");
}

void add_kernel_options(CLI::App* app, KernelOptions& k) {
  app->add_option("--family", k.family, "stable, laplace or energy");
  app->add_option("--gamma", k.gamma, "Kernel exponent");
  app->add_option("--scale", k.scale, "Kernel scale (default 1)");
}

// {"delta": D} or a benchmark description as accepted by `threshold`.
std::pair<double, ThresholdProvenance> delta_from_config(const std::string& path,
                                                         const std::vector<KernelSpec>& kernels) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(path + ": expected a JSON object");
  try {
    if (doc.contains("delta")) {
      return {doc["delta"].get<double>(), ThresholdProvenance::UserSupplied};
    }
    ThresholdOptions o;
    o.bench.name = doc.at("benchmark").get<std::string>();
    o.bench.p = doc.value("p", o.bench.p);
    o.bench.q = doc.value("q", o.bench.q);
    o.bench.theta = doc.value("theta", o.bench.theta);
    o.bench.mu0 = doc.value("mu0", o.bench.mu0);
    o.bench.rho = doc.value("rho", o.bench.rho);
    o.bench.nu = doc.value("nu", o.bench.nu);
    o.bench.shape = doc.value("shape", o.bench.shape);
    o.bench.shift = doc.value("shift", o.bench.shift);
    o.method = doc.value("method", o.method);
    o.b = doc.value("B", o.b);
    o.seed = doc.value("seed", o.seed);
    const ThresholdResult r = compute_threshold(o, kernels);
    return {r.delta, provenance_of(r.method)};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Characteristic-function equivalence tests", "cfeq"};
  app.require_subcommand(1);

  // test
  std::string hypothesis;
  std::string data_path, data2_path, out_path, delta_config;
  std::optional<std::size_t> split;
  std::optional<double> delta;
  double alpha = 0.05;
  KernelOptions kernel;
  auto* test = app.add_subcommand("test", "Run one equivalence test on CSV data");
  test->add_option("hypothesis", hypothesis, "symmetry, homogeneity or independence")->required();
  test->add_option("--data", data_path, "CSV sample")->required();
  test->add_option("--data2", data2_path, "Second CSV sample (homogeneity, or y for independence)");
  test->add_option("--split", split, "Independence: the first P columns are x");
  add_kernel_options(test, kernel);
  test->add_option("--family2", kernel.family2, "Kernel family for y (independence)");
  test->add_option("--gamma2", kernel.gamma2, "Kernel exponent for y (independence)");
  auto* delta_opt = test->add_option("--delta", delta, "Equivalence margin");
  auto* delta_cfg_opt = test->add_option("--delta-config", delta_config,
                                         "JSON file with the margin or a benchmark to derive it");
  delta_opt->excludes(delta_cfg_opt);
  test->add_option("--alpha", alpha, "Significance level (default 0.05)");
  test->add_option("--out", out_path, "Write the JSON report here instead of stdout");

  // threshold
  ThresholdOptions thr;
  KernelOptions thr_kernel;
  std::string thr_out;
  auto* threshold = app.add_subcommand("threshold", "Equivalence margin for a benchmark law");
  threshold->add_option("--benchmark", thr.bench.name,
                        "skew-normal, skew-cauchy, gauss-shift, gamma-scale, mvn-cross, "
                        "mvt-cross or gauss-mixture")
      ->required();
  add_benchmark_options(threshold, thr.bench);
  add_kernel_options(threshold, thr_kernel);
  threshold->add_option("--gamma2", thr_kernel.gamma2, "Kernel exponent for y (independence)");
  threshold->add_option("--method", thr.method, "ra (random approximation) or quad");
  threshold->add_option("-B", thr.b, "Benchmark sample size for ra (default 5000)");
  threshold->add_option("--seed", thr.seed, "Seed for ra (default 1)");
  threshold->add_option("--out", thr_out, "Write the JSON result here instead of stdout");

  // closed-form
  std::string form;
  double rho = 0.0;
  std::size_t cf_p = 1;
  double delta_norm = 0.0;
  double cf_mu0 = 2.0;
  KernelOptions cf_kernel;
  auto* closed = app.add_subcommand("closed-form", "Population distances in closed form");
  closed->add_option("form", form, "indep-gauss, sym-mixture, homog-mixture or gauss-shift")
      ->required();
  closed->add_option("--rho", rho, "Correlation (indep-gauss)");
  closed->add_option("--p", cf_p, "Dimension");
  closed->add_option("--delta-norm", delta_norm, "Norm of the mixture shift");
  closed->add_option("--mu0", cf_mu0, "Mean shift (gauss-shift)");
  add_kernel_options(closed, cf_kernel);

  // simulate
  std::string config_path, results_path;
  std::optional<std::size_t> jobs;
  std::optional<std::uint64_t> seed;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo rejection rates for an example");
  simulate->add_option("--config", config_path, "JSON experiment config")->required();
  simulate->add_option("--out", results_path, "CSV output path")->required();
  simulate->add_option("--jobs", jobs, "Worker threads (default CFEQ_JOBS or the core count)");
  simulate->add_option("--seed", seed, "Overrides the config seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "cfeq: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (test->parsed()) {
      const Hypothesis h = parse_hypothesis(hypothesis);
      const std::vector<KernelSpec> kernels = make_kernels(kernel);
      EquivalenceConfig cfg;
      cfg.alpha = alpha;
      ThresholdProvenance provenance = ThresholdProvenance::UserSupplied;
      if (delta) {
        cfg.delta = *delta;
      } else if (!delta_config.empty()) {
        std::tie(cfg.delta, provenance) = delta_from_config(delta_config, kernels);
      } else {
        throw ConfigError("one of --delta or --delta-config is required");
      }
      cfg.validate();

      TestData data = [&]() -> TestData {
        switch (h) {
          case Hypothesis::Symmetry:
            return read_sample_csv(data_path);
          case Hypothesis::Homogeneity:
            if (data2_path.empty()) throw ConfigError("homogeneity needs --data2");
            return TwoSample(read_sample_csv(data_path), read_sample_csv(data2_path));
          case Hypothesis::Independence:
            if (!data2_path.empty()) {
              return PairedSample(read_sample_csv(data_path), read_sample_csv(data2_path));
            }
            if (!split) throw ConfigError("independence needs --split or --data2");
            return PairedSample::split(read_sample_csv(data_path), *split);
        }
        throw ConfigError("unknown hypothesis");
      }();
      const TestReport report = run_test(h, kernels, data, cfg, provenance);
      emit(report_to_json(report), out_path, out);
      err << to_string(h) << ": statistic " << number(report.statistic) << ", critical value "
          << number(report.critical_value) << ", "
          << (report.reject_null ? "equivalence declared" : "equivalence not declared") << "\n";
      if (report.degenerate_variance) err << "warning: estimated variance is zero\n";
      if (report.moment_condition_caveat) {
        err << "note: the energy kernel assumes finite moments of order 2*gamma\n";
      }
      return kSuccess;
    }

    if (threshold->parsed()) {
      const ThresholdResult r = compute_threshold(thr, make_kernels(thr_kernel));
      if (r.negative_warning) err << "warning: the random approximation came out negative\n";
      emit(threshold_to_json(r), thr_out, out);
      return kSuccess;
    }

    if (closed->parsed()) {
      double value = 0.0;
      if (form == "indep-gauss") {
        value = closed_form_independence_gauss(rho);
      } else if (form == "sym-mixture") {
        value = closed_form_symmetry_mixture(cf_p, delta_norm);
      } else if (form == "homog-mixture") {
        value = closed_form_homogeneity_mixture(cf_p, delta_norm);
      } else if (form == "gauss-shift") {
        value = threshold_gaussian_shift_quadrature(make_kernels(cf_kernel)[0], cf_p, cf_mu0).delta;
      } else {
        throw ConfigError("unknown closed form '" + form + "'");
      }
      out << number(value) << "\n";
      return kSuccess;
    }

    if (simulate->parsed()) {
      ExperimentConfig cfg = parse_experiment_config(read_text_file(config_path));
      if (jobs) cfg.jobs = *jobs;
      if (seed) cfg.seed = *seed;
      const ExperimentResult result = run_experiment(cfg);
      write_results_csv(result, results_path);
      std::size_t aborted = 0;
      for (const ExperimentRecord& r : result.records) {
        if (r.error) {
          ++aborted;
          err << "cell " << to_string(r.example) << ' ' << r.kernel.label() << " n=" << r.n
              << " p=" << r.p << " param=" << r.param << " aborted: " << *r.error << "\n";
        }
      }
      err << result.records.size() << " cells written to " << results_path;
      if (aborted > 0) err << " (" << aborted << " aborted)";
      err << "\n";
      return kSuccess;
    }
  } catch (const ConfigError& e) {
    err << "cfeq: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedKernelError& e) {
    err << "cfeq: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "cfeq: numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const Error& e) {
    err << "cfeq: data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "cfeq: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace cfeq::cli
