#include "cfeq/estimators.hpp"

#include <string>

#include "cfeq/errors.hpp"
#include "pairwise.hpp"
#include "sweeps.hpp"

namespace cfeq {
namespace detail {

double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kLeaf = 16;
  if (v.size() <= kLeaf) {
    double s = 0.0;
    for (double e : v) s += e;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double Degree2Sums::statistic() const {
  const double nn = static_cast<double>(n);
  return total / (nn * (nn - 1.0));
}

double Degree2Sums::raw_variance() const {
  const double nn = static_cast<double>(n);
  std::vector<double> sq(row_sums.size());
  for (std::size_t i = 0; i < row_sums.size(); ++i) sq[i] = row_sums[i] * row_sums[i];
  const double triples = pairwise_sum(sq) - total_sq;
  const double u = statistic();
  return 4.0 * triples / (nn * (nn - 1.0) * (nn - 2.0)) - 4.0 * u * u;
}

namespace {

void validate_all(std::span<const KernelSpec> specs) {
  for (const auto& s : specs) s.validate();
}

void finish(Degree2Sums& d, std::vector<double>& sq_partial) {
  d.total = pairwise_sum(d.row_sums);
  d.total_sq = 2.0 * pairwise_sum(sq_partial);
}

}  // namespace

std::vector<Degree2Sums> symmetry_sweep(std::span<const KernelSpec> specs, const SampleMatrix& x) {
  validate_all(specs);
  const std::size_t n = x.rows();
  const Columns cols(x);
  std::vector<Degree2Sums> out(specs.size());
  std::vector<std::vector<double>> sq_partial(specs.size(), std::vector<double>(n, 0.0));
  for (auto& d : out) {
    d.n = n;
    d.row_sums.assign(n, 0.0);
  }
  std::vector<double> sqd(n), sqs(n), kd(n), ks(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t m = n - i - 1;
    squared_norm_row(cols, i, cols, i + 1, Combine::Difference, std::span(sqd).first(m));
    squared_norm_row(cols, i, cols, i + 1, Combine::Sum, std::span(sqs).first(m));
    for (std::size_t s = 0; s < specs.size(); ++s) {
      eval_kernel_radial(specs[s], std::span<const double>(sqd).first(m), std::span(kd).first(m));
      eval_kernel_radial(specs[s], std::span<const double>(sqs).first(m), std::span(ks).first(m));
      double* r = out[s].row_sums.data() + i + 1;
      double ri = 0.0;
      double q = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        const double psi = 0.5 * (kd[t] - ks[t]);
        ri += psi;
        r[t] += psi;
        q += psi * psi;
      }
      out[s].row_sums[i] += ri;
      sq_partial[s][i] = q;
    }
  }
  for (std::size_t s = 0; s < specs.size(); ++s) finish(out[s], sq_partial[s]);
  return out;
}

std::vector<Degree2Sums> homogeneity_sweep(std::span<const KernelSpec> specs,
                                           const SampleMatrix& x, const SampleMatrix& y) {
  validate_all(specs);
  const std::size_t n = x.rows();
  const Columns cx(x);
  const Columns cy(y);
  std::vector<Degree2Sums> out(specs.size());
  std::vector<std::vector<double>> sq_partial(specs.size(), std::vector<double>(n, 0.0));
  for (auto& d : out) {
    d.n = n;
    d.row_sums.assign(n, 0.0);
  }
  std::vector<double> sxx(n), syy(n), sxy(n), syx(n);
  std::vector<double> kxx(n), kyy(n), kxy(n), kyx(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t m = n - i - 1;
    squared_norm_row(cx, i, cx, i + 1, Combine::Difference, std::span(sxx).first(m));
    squared_norm_row(cy, i, cy, i + 1, Combine::Difference, std::span(syy).first(m));
    squared_norm_row(cx, i, cy, i + 1, Combine::Difference, std::span(sxy).first(m));
    squared_norm_row(cy, i, cx, i + 1, Combine::Difference, std::span(syx).first(m));
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const auto& spec = specs[s];
      eval_kernel_radial(spec, std::span<const double>(sxx).first(m), std::span(kxx).first(m));
      eval_kernel_radial(spec, std::span<const double>(syy).first(m), std::span(kyy).first(m));
      eval_kernel_radial(spec, std::span<const double>(sxy).first(m), std::span(kxy).first(m));
      eval_kernel_radial(spec, std::span<const double>(syx).first(m), std::span(kyx).first(m));
      double* r = out[s].row_sums.data() + i + 1;
      double ri = 0.0;
      double q = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        const double psi = (kxx[t] + kyy[t]) - (kxy[t] + kyx[t]);
        ri += psi;
        r[t] += psi;
        q += psi * psi;
      }
      out[s].row_sums[i] += ri;
      sq_partial[s][i] = q;
    }
  }
  for (std::size_t s = 0; s < specs.size(); ++s) finish(out[s], sq_partial[s]);
  return out;
}

IndependenceSums independence_sweep(const KernelSpec& spec_p, const KernelSpec& spec_q,
                                    const SampleMatrix& x, const SampleMatrix& y,
                                    bool with_cross_products) {
  spec_p.validate();
  spec_q.validate();
  const std::size_t n = x.rows();
  const Columns cx(x);
  const Columns cy(y);
  IndependenceSums out;
  out.n = n;
  out.a.assign(n, 0.0);
  out.b.assign(n, 0.0);
  out.c.assign(n, 0.0);
  std::vector<double> sa(n), sb(n), ka(n), kb(n);

  auto rows = [&](std::size_t i, std::size_t m) {
    squared_norm_row(cx, i, cx, i + 1, Combine::Difference, std::span(sa).first(m));
    squared_norm_row(cy, i, cy, i + 1, Combine::Difference, std::span(sb).first(m));
    eval_kernel_radial(spec_p, std::span<const double>(sa).first(m), std::span(ka).first(m));
    eval_kernel_radial(spec_q, std::span<const double>(sb).first(m), std::span(kb).first(m));
  };

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t m = n - i - 1;
    rows(i, m);
    double* a = out.a.data() + i + 1;
    double* b = out.b.data() + i + 1;
    double* c = out.c.data() + i + 1;
    double ai = 0.0, bi = 0.0, ci = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
      const double ab = ka[t] * kb[t];
      ai += ka[t];
      a[t] += ka[t];
      bi += kb[t];
      b[t] += kb[t];
      ci += ab;
      c[t] += ab;
    }
    out.a[i] += ai;
    out.b[i] += bi;
    out.c[i] += ci;
  }
  out.s1 = pairwise_sum(out.c);
  out.s2 = pairwise_sum(out.a);
  out.s3 = pairwise_sum(out.b);
  std::vector<double> per_row(n);
  for (std::size_t i = 0; i < n; ++i) per_row[i] = out.a[i] * out.b[i] - out.c[i];
  out.t4 = pairwise_sum(per_row);

  if (with_cross_products) {
    out.b_times_a.assign(n, 0.0);
    out.a_times_b.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t m = n - i - 1;
      rows(i, m);
      const double* a = out.a.data() + i + 1;
      const double* b = out.b.data() + i + 1;
      double* ba = out.b_times_a.data() + i + 1;
      double* ab = out.a_times_b.data() + i + 1;
      const double a_i = out.a[i];
      const double b_i = out.b[i];
      double ba_i = 0.0, ab_i = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        ba_i += kb[t] * a[t];
        ba[t] += kb[t] * a_i;
        ab_i += ka[t] * b[t];
        ab[t] += ka[t] * b_i;
      }
      out.b_times_a[i] += ba_i;
      out.a_times_b[i] += ab_i;
    }
  }
  return out;
}

}  // namespace detail

namespace {

void require_rows(std::size_t n, std::size_t minimum, const char* what) {
  if (n < minimum) {
    throw InsufficientSampleError(std::string(what) + " needs at least " +
                                  std::to_string(minimum) + " observations, got " +
                                  std::to_string(n));
  }
}

}  // namespace

double symmetry_stat(const KernelSpec& spec, const SampleMatrix& x) {
  return symmetry_stat(std::span(&spec, 1), x).front();
}

std::vector<double> symmetry_stat(std::span<const KernelSpec> specs, const SampleMatrix& x) {
  require_rows(x.rows(), 2, "symmetry statistic");
  std::vector<double> out;
  for (const auto& d : detail::symmetry_sweep(specs, x)) out.push_back(d.statistic());
  return out;
}

double homogeneity_stat(const KernelSpec& spec, const TwoSample& s) {
  return homogeneity_stat(std::span(&spec, 1), s).front();
}

std::vector<double> homogeneity_stat(std::span<const KernelSpec> specs, const TwoSample& s) {
  require_rows(s.x.rows(), 2, "homogeneity statistic");
  std::vector<double> out;
  for (const auto& d : detail::homogeneity_sweep(specs, s.x, s.y)) out.push_back(d.statistic());
  return out;
}

IndependenceComponents independence_stat(const KernelSpec& spec_p, const KernelSpec& spec_q,
                                         const PairedSample& s) {
  require_rows(s.x.rows(), 3, "independence statistic");
  const auto sums = detail::independence_sweep(spec_p, spec_q, s.x, s.y, false);
  const double n = static_cast<double>(sums.n);
  const double pairs = n * (n - 1.0);
  return IndependenceComponents::from(sums.s1 / pairs, sums.s2 / pairs, sums.s3 / pairs,
                                      sums.t4 / (pairs * (n - 2.0)));
}

IndependenceComponents independence_stat_bruteforce(const KernelSpec& spec_p,
                                                    const KernelSpec& spec_q,
                                                    const PairedSample& s) {
  spec_p.validate();
  spec_q.validate();
  const std::size_t n = s.x.rows();
  require_rows(n, 3, "independence statistic");

  auto gram = [n](const KernelSpec& spec, const SampleMatrix& z) {
    std::vector<double> g(n * n);
    std::vector<double> diff(z.cols());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < z.cols(); ++k) diff[k] = z(i, k) - z(j, k);
        g[i * n + j] = eval_kernel(spec, diff);
      }
    }
    return g;
  };
  const auto A = gram(spec_p, s.x);
  const auto B = gram(spec_q, s.y);

  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      s1 += A[i * n + j] * B[i * n + j];
      s2 += A[i * n + j];
      s3 += B[i * n + j];
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        s4 += A[i * n + j] * B[i * n + k];
      }
    }
  }
  const double nn = static_cast<double>(n);
  const double pairs = nn * (nn - 1.0);
  return IndependenceComponents::from(s1 / pairs, s2 / pairs, s3 / pairs,
                                      s4 / (pairs * (nn - 2.0)));
}

}  // namespace cfeq
