#include "cfeq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <string>
#include <thread>

#include <json.hpp>

#include "cfeq/errors.hpp"
#include "cfeq/variance.hpp"

namespace cfeq {
namespace {

using nlohmann::json;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<KernelGrid> default_kernels() {
  return {{KernelFamily::Stable, {0.5, 1.0, 1.5, 2.0}, 1.0},
          {KernelFamily::Laplace, {0.1, 0.25, 1.0, 4.0}, 1.0}};
}

template <class T>
std::vector<T> as_list(const json& v, const char* key) {
  try {
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <class T>
T as_scalar(const json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

struct CellOutcome {
  std::vector<char> rejected;  // [trial * kernels + k]
  std::vector<double> statistic;
  std::vector<double> sigma;
  std::vector<std::string> errors;  // per trial, empty when fine
};

// Per-kernel threshold for one (p, q): either a usable delta or a reason.
struct KernelThreshold {
  double delta = 0.0;
  std::string error;
};

}  // namespace

std::string_view to_string(Example e) {
  switch (e) {
    case Example::E1a:
      return "E1a";
    case Example::E1b:
      return "E1b";
    case Example::E2a:
      return "E2a";
    case Example::E2b:
      return "E2b";
    case Example::E3a:
      return "E3a";
    case Example::E3b:
      return "E3b";
  }
  return "?";
}

Example parse_example(std::string_view name) {
  const std::string s = lower(name);
  for (Example e : {Example::E1a, Example::E1b, Example::E2a, Example::E2b, Example::E3a,
                    Example::E3b}) {
    if (s == lower(to_string(e))) return e;
  }
  throw ConfigError("unknown example '" + std::string(name) + "' (expected E1a..E3b)");
}

Hypothesis hypothesis_of(Example e) {
  switch (e) {
    case Example::E1a:
    case Example::E1b:
      return Hypothesis::Symmetry;
    case Example::E2a:
    case Example::E2b:
      return Hypothesis::Homogeneity;
    case Example::E3a:
    case Example::E3b:
      return Hypothesis::Independence;
  }
  return Hypothesis::Symmetry;
}

BenchmarkSpec example_benchmark(Example e, std::size_t p, std::size_t q, double param) {
  switch (e) {
    case Example::E1a:
      return SkewNormalSpec{p, param};
    case Example::E1b:
      return SkewCauchySpec{p, param};
    case Example::E2a:
      return GaussShiftSpec{p, param};
    case Example::E2b:
      return GammaScaleSpec{p, 5.0, param};
    case Example::E3a:
      return MvnCrossSpec{p, q, param};
    case Example::E3b:
      return MvtCrossSpec{p, q, param, 5.0};
  }
  throw ConfigError("unknown example");
}

ExperimentConfig ExperimentConfig::defaults(Example e) {
  ExperimentConfig cfg;
  cfg.example = e;
  cfg.kernels = default_kernels();
  switch (hypothesis_of(e)) {
    case Hypothesis::Symmetry:
      cfg.benchmark = 3.0;
      cfg.grid = {5.0, 4.0, 3.0, 2.0, 1.0, 0.0};
      break;
    case Hypothesis::Homogeneity:
      cfg.benchmark = 2.0;
      cfg.grid = {2.2, 2.1, 2.0, 1.9, 1.8, 1.7};
      break;
    case Hypothesis::Independence:
      cfg.benchmark = 0.8;
      cfg.grid = {0.84, 0.82, 0.8, 0.75, 0.7, 0.65};
      break;
  }
  return cfg;
}

std::vector<KernelSpec> ExperimentConfig::kernel_specs() const {
  std::vector<KernelSpec> out;
  for (const KernelGrid& g : kernels) {
    for (double gamma : g.gammas) out.push_back(KernelSpec{g.family, gamma, g.scale});
  }
  return out;
}

std::vector<std::size_t> ExperimentConfig::q_values(std::size_t p_value) const {
  if (hypothesis_of(example) != Hypothesis::Independence) return {0};
  if (q.empty()) return {p_value};
  return q;
}

void ExperimentConfig::validate() const {
  if (kernels.empty()) throw ConfigError("kernel grid is empty");
  for (const KernelGrid& g : kernels) {
    if (g.gammas.empty()) throw ConfigError("kernel gamma list is empty");
  }
  for (const KernelSpec& k : kernel_specs()) k.validate();
  if (n.empty() || p.empty() || grid.empty()) throw ConfigError("n, p and grid must be nonempty");
  for (std::size_t v : n) {
    if (v < 4) throw ConfigError("every n must be at least 4");
  }
  for (std::size_t v : p) {
    if (v < 1) throw ConfigError("every p must be at least 1");
  }
  for (std::size_t v : q) {
    if (v < 1) throw ConfigError("every q must be at least 1");
  }
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!std::isfinite(benchmark)) throw ConfigError("benchmark parameter must be finite");
  for (double v : grid) {
    if (!std::isfinite(v)) throw ConfigError("grid values must be finite");
  }
  switch (threshold_method) {
    case ThresholdMethod::RandomApprox:
      if (b < kMinHarnessB) {
        throw ConfigError("B must be at least " + std::to_string(kMinHarnessB));
      }
      break;
    case ThresholdMethod::Quadrature:
      if (example != Example::E2a) {
        throw ConfigError("quadrature thresholds are available for E2a only");
      }
      for (const KernelGrid& g : kernels) {
        if (g.family == KernelFamily::Energy) {
          throw ConfigError("quadrature thresholds need a stable or laplace kernel");
        }
      }
      break;
    case ThresholdMethod::ClosedForm:
      throw ConfigError("closed-form thresholds are not available for the simulation examples");
  }
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  Example example = Example::E2a;
  if (doc.contains("example")) example = parse_example(as_scalar<std::string>(doc["example"], "example"));
  ExperimentConfig cfg = ExperimentConfig::defaults(example);

  static const std::set<std::string> known{"example", "kernels", "n",    "p",
                                           "q",       "trials",  "alpha", "benchmark",
                                           "grid",    "B",       "seed",  "threshold_method",
                                           "jobs"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  if (doc.contains("kernels")) {
    const json& ks = doc["kernels"];
    if (!ks.is_array()) throw ConfigError("config key 'kernels' must be an array");
    cfg.kernels.clear();
    for (const json& k : ks) {
      if (!k.is_object() || !k.contains("family") || !k.contains("gamma")) {
        throw ConfigError("each kernel needs 'family' and 'gamma'");
      }
      for (const auto& [key, value] : k.items()) {
        if (key != "family" && key != "gamma" && key != "scale") {
          throw ConfigError("unknown kernel key '" + key + "'");
        }
      }
      KernelGrid g;
      g.family = parse_kernel_family(as_scalar<std::string>(k["family"], "family"));
      g.gammas = as_list<double>(k["gamma"], "gamma");
      if (k.contains("scale")) g.scale = as_scalar<double>(k["scale"], "scale");
      cfg.kernels.push_back(std::move(g));
    }
  }
  if (doc.contains("n")) cfg.n = as_list<std::size_t>(doc["n"], "n");
  if (doc.contains("p")) cfg.p = as_list<std::size_t>(doc["p"], "p");
  if (doc.contains("q")) cfg.q = as_list<std::size_t>(doc["q"], "q");
  if (doc.contains("trials")) cfg.trials = as_scalar<std::size_t>(doc["trials"], "trials");
  if (doc.contains("alpha")) cfg.alpha = as_scalar<double>(doc["alpha"], "alpha");
  if (doc.contains("benchmark")) cfg.benchmark = as_scalar<double>(doc["benchmark"], "benchmark");
  if (doc.contains("grid")) cfg.grid = as_list<double>(doc["grid"], "grid");
  if (doc.contains("B")) cfg.b = as_scalar<std::size_t>(doc["B"], "B");
  if (doc.contains("seed")) cfg.seed = as_scalar<std::uint64_t>(doc["seed"], "seed");
  if (doc.contains("threshold_method")) {
    cfg.threshold_method =
        parse_threshold_method(as_scalar<std::string>(doc["threshold_method"], "threshold_method"));
  }
  if (doc.contains("jobs")) cfg.jobs = as_scalar<std::size_t>(doc["jobs"], "jobs");
  cfg.validate();
  return cfg;
}

std::size_t resolve_jobs(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CFEQ_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::vector<KernelThreshold> compute_thresholds(const ExperimentConfig& cfg,
                                                const std::vector<KernelSpec>& specs,
                                                std::size_t p, std::size_t q) {
  std::vector<KernelThreshold> out(specs.size());
  auto accept = [](KernelThreshold& slot, const ThresholdResult& r) {
    slot.delta = r.delta;
    if (!(r.delta > 0.0)) slot.error = "threshold is not positive (" + std::to_string(r.delta) + ")";
  };
  if (cfg.threshold_method == ThresholdMethod::Quadrature) {
    for (std::size_t k = 0; k < specs.size(); ++k) {
      try {
        accept(out[k], threshold_gaussian_shift_quadrature(specs[k], p, cfg.benchmark));
      } catch (const Error& e) {
        out[k].error = e.what();
      }
    }
    return out;
  }
  try {
    const BenchmarkSpec bench = example_benchmark(cfg.example, p, q, cfg.benchmark);
    const std::vector<ThresholdResult> rs =
        threshold_random_approx(bench, std::span<const KernelSpec>(specs), cfg.b, cfg.seed);
    for (std::size_t k = 0; k < specs.size(); ++k) accept(out[k], rs[k]);
  } catch (const Error& e) {
    for (KernelThreshold& t : out) t.error = e.what();
  }
  return out;
}

// Runs fn(i) for i in [0, count) on `jobs` threads.
template <class Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  const std::size_t workers = std::min(jobs, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
}

void run_trial(const ExperimentConfig& cfg, const std::vector<KernelSpec>& specs,
               const std::vector<KernelThreshold>& thresholds, const BenchmarkSpec& law,
               std::size_t n, RngStream rng, std::size_t t, CellOutcome& out) {
  const std::size_t kn = specs.size();
  const TestData data = draw_benchmark(law, n, rng);
  std::vector<double> stat(kn), var(kn);
  switch (hypothesis_of(cfg.example)) {
    case Hypothesis::Symmetry: {
      const auto ms = symmetry_moments(specs, std::get<SampleMatrix>(data));
      for (std::size_t k = 0; k < kn; ++k) {
        stat[k] = ms[k].statistic;
        var[k] = ms[k].variance;
      }
      break;
    }
    case Hypothesis::Homogeneity: {
      const auto ms = homogeneity_moments(specs, std::get<TwoSample>(data));
      for (std::size_t k = 0; k < kn; ++k) {
        stat[k] = ms[k].statistic;
        var[k] = ms[k].variance;
      }
      break;
    }
    case Hypothesis::Independence: {
      const auto& s = std::get<PairedSample>(data);
      for (std::size_t k = 0; k < kn; ++k) {
        const IndependenceMoments m = independence_moments(specs[k], specs[k], s);
        stat[k] = m.components.stat;
        var[k] = m.variance;
      }
      break;
    }
  }
  for (std::size_t k = 0; k < kn; ++k) {
    const std::size_t slot = t * kn + k;
    out.statistic[slot] = stat[k];
    out.sigma[slot] = std::sqrt(std::max(var[k], 0.0));
    if (!thresholds[k].error.empty()) continue;
    const TestReport r = decide(stat[k], out.sigma[slot], n, {thresholds[k].delta, cfg.alpha});
    out.rejected[slot] = r.reject_null ? 1 : 0;
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<KernelSpec> specs = cfg.kernel_specs();
  const std::size_t kn = specs.size();
  const std::size_t jobs = resolve_jobs(cfg.jobs);
  const bool independence = hypothesis_of(cfg.example) == Hypothesis::Independence;
  const RngStream base(cfg.seed, 0x4558'0000ULL + static_cast<std::uint64_t>(cfg.example));

  // Records for each kernel, in (n, p, q, param) order, assembled per kernel at the end.
  std::vector<std::vector<ExperimentRecord>> by_kernel(kn);

  for (std::size_t p : cfg.p) {
    for (std::size_t q : cfg.q_values(p)) {
      const std::vector<KernelThreshold> thresholds = compute_thresholds(cfg, specs, p, q);
      for (std::size_t n : cfg.n) {
        for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
          const double param = cfg.grid[gi];
          const auto start = std::chrono::steady_clock::now();
          CellOutcome out;
          out.rejected.assign(cfg.trials * kn, 0);
          out.statistic.assign(cfg.trials * kn, 0.0);
          out.sigma.assign(cfg.trials * kn, 0.0);
          out.errors.assign(cfg.trials, {});

          std::string cell_error;
          BenchmarkSpec law;
          try {
            law = example_benchmark(cfg.example, p, q, param);
            validate(law);
          } catch (const Error& e) {
            cell_error = e.what();
          }
          if (cell_error.empty()) {
            const RngStream cell =
                base.substream(n).substream(p * 100003 + q).substream(gi);
            parallel_for(cfg.trials, jobs, [&](std::size_t t) {
              try {
                run_trial(cfg, specs, thresholds, law, n, cell.substream(t), t, out);
              } catch (const std::exception& e) {
                out.errors[t] = e.what();
              }
            });
            for (std::size_t t = 0; t < cfg.trials; ++t) {
              if (!out.errors[t].empty()) {
                cell_error = "trial " + std::to_string(t) + ": " + out.errors[t];
                break;
              }
            }
          }
          const double wall =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

          for (std::size_t k = 0; k < kn; ++k) {
            ExperimentRecord rec;
            rec.example = cfg.example;
            rec.kernel = specs[k];
            rec.n = n;
            rec.p = p;
            if (independence) rec.q = q;
            rec.param = param;
            rec.delta = thresholds[k].delta;
            rec.threshold_method = cfg.threshold_method;
            rec.trials = cfg.trials;
            rec.wall_seconds = wall;
            rec.seed = cfg.seed;
            if (!cell_error.empty()) {
              rec.error = cell_error;
            } else if (!thresholds[k].error.empty()) {
              rec.error = "threshold: " + thresholds[k].error;
            }
            if (rec.error) {
              rec.rejection_rate = std::numeric_limits<double>::quiet_NaN();
              rec.mean_statistic = std::numeric_limits<double>::quiet_NaN();
              rec.mean_sigma = std::numeric_limits<double>::quiet_NaN();
            } else {
              double sum_stat = 0.0;
              double sum_sigma = 0.0;
              for (std::size_t t = 0; t < cfg.trials; ++t) {
                rec.rejections += static_cast<std::size_t>(out.rejected[t * kn + k]);
                sum_stat += out.statistic[t * kn + k];
                sum_sigma += out.sigma[t * kn + k];
              }
              const double trials = static_cast<double>(cfg.trials);
              rec.rejection_rate = static_cast<double>(rec.rejections) / trials;
              rec.mean_statistic = sum_stat / trials;
              rec.mean_sigma = sum_sigma / trials;
            }
            by_kernel[k].push_back(std::move(rec));
          }
        }
      }
    }
  }

  ExperimentResult result;
  result.config = cfg;
  for (auto& recs : by_kernel) {
    // Cells were produced in (p, q, n, param) order; report them as (n, p, q, param).
    auto n_rank = [&](std::size_t n) {
      return std::find(cfg.n.begin(), cfg.n.end(), n) - cfg.n.begin();
    };
    std::stable_sort(recs.begin(), recs.end(),
                     [&](const ExperimentRecord& a, const ExperimentRecord& b) {
                       return n_rank(a.n) < n_rank(b.n);
                     });
    for (auto& r : recs) result.records.push_back(std::move(r));
  }
  return result;
}

}  // namespace cfeq
