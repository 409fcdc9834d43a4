#include "cfeq/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

#include "cfeq/errors.hpp"
#include "pairwise.hpp"

namespace cfeq {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Stable:
      return "stable";
    case KernelFamily::Laplace:
      return "laplace";
    case KernelFamily::Energy:
      return "energy";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "stable") return KernelFamily::Stable;
  if (lower == "laplace") return KernelFamily::Laplace;
  if (lower == "energy") return KernelFamily::Energy;
  throw ConfigError("unknown kernel family '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw ConfigError("kernel exponent gamma must be positive and finite");
  }
  if (!std::isfinite(scale) || scale <= 0.0) {
    throw ConfigError("kernel scale must be positive and finite");
  }
  if ((family == KernelFamily::Stable || family == KernelFamily::Energy) && gamma > 2.0) {
    throw ConfigError(std::string(to_string(family)) + " kernel requires gamma in (0, 2]");
  }
}

std::string KernelSpec::label() const {
  std::ostringstream os;
  os << to_string(family) << "(gamma=" << gamma;
  if (scale != 1.0) os << ", scale=" << scale;
  os << ')';
  return os.str();
}

KernelSpec stable_kernel(double gamma, double scale) {
  KernelSpec s{KernelFamily::Stable, gamma, scale};
  s.validate();
  return s;
}

KernelSpec laplace_kernel(double gamma, double scale) {
  KernelSpec s{KernelFamily::Laplace, gamma, scale};
  s.validate();
  return s;
}

KernelSpec energy_kernel(double gamma, double scale) {
  KernelSpec s{KernelFamily::Energy, gamma, scale};
  s.validate();
  return s;
}

double eval_kernel_radial(const KernelSpec& spec, double squared_norm) {
  if (!std::isfinite(squared_norm) || squared_norm < 0.0) {
    throw InputDomainError("squared norm must be finite and nonnegative");
  }
  const double u2 = spec.scale * spec.scale * squared_norm;
  switch (spec.family) {
    case KernelFamily::Stable:
      if (u2 == 0.0) return 1.0;
      return std::exp(-std::pow(u2, 0.5 * spec.gamma));
    case KernelFamily::Laplace:
      return std::pow(1.0 + u2, -spec.gamma);
    case KernelFamily::Energy:
      if (u2 == 0.0) return 0.0;
      return -std::pow(u2, 0.5 * spec.gamma);
  }
  return 0.0;
}

double eval_kernel(const KernelSpec& spec, std::span<const double> u) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : u) {
    if (!std::isfinite(v)) throw InputDomainError("kernel argument has a non-finite entry");
    const double y = v * v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return eval_kernel_radial(spec, sum);
}

namespace {

// Upper triangle of C(x_i -/+ x_j), mirrored; the diagonal is handled by the caller.
Matrix symmetric_gram(const KernelSpec& spec, const SampleMatrix& x, detail::Combine op,
                      bool fill_diagonal) {
  spec.validate();
  const std::size_t n = x.rows();
  const detail::Columns cols(x);
  Matrix g(n, n);
  std::vector<double> sq(n);
  std::vector<double> kv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t first = fill_diagonal ? i : i + 1;
    const std::size_t m = n - first;
    if (m == 0) continue;
    detail::squared_norm_row(cols, i, cols, first, op, std::span(sq).first(m));
    eval_kernel_radial(spec, std::span<const double>(sq).first(m), std::span(kv).first(m));
    for (std::size_t t = 0; t < m; ++t) {
      const std::size_t j = first + t;
      g(i, j) = kv[t];
      g(j, i) = kv[t];
    }
  }
  return g;
}

}  // namespace

GramPair gram_diff(const KernelSpec& spec, const SampleMatrix& x) {
  Matrix d = symmetric_gram(spec, x, detail::Combine::Difference, false);
  const double c0 = eval_kernel_radial(spec, 0.0);
  for (Eigen::Index i = 0; i < d.rows(); ++i) d(i, i) = c0;
  return {std::move(d), std::nullopt, spec};
}

Matrix gram_sum(const KernelSpec& spec, const SampleMatrix& x) {
  return symmetric_gram(spec, x, detail::Combine::Sum, true);
}

GramPair gram_pair(const KernelSpec& spec, const SampleMatrix& x) {
  GramPair g = gram_diff(spec, x);
  g.sum = gram_sum(spec, x);
  return g;
}

Matrix gram_cross(const KernelSpec& spec, const SampleMatrix& x, const SampleMatrix& y) {
  spec.validate();
  if (x.cols() != y.cols()) throw ShapeError("cross Gram needs equal column counts");
  const detail::Columns cx(x);
  const detail::Columns cy(y);
  Matrix g(x.rows(), y.rows());
  std::vector<double> sq(y.rows());
  std::vector<double> kv(y.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    detail::squared_norm_row(cx, i, cy, 0, detail::Combine::Difference, sq);
    eval_kernel_radial(spec, sq, kv);
    for (std::size_t j = 0; j < y.rows(); ++j) g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kv[j];
  }
  return g;
}

}  // namespace cfeq
