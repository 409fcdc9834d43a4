// Compiled with -ffast-math (see CMakeLists.txt). Keep this unit free of
// NaN/Inf checks: inputs are validated squared norms.

#include <cmath>
#include <cstddef>

#include "cfeq/kernels.hpp"

namespace cfeq {

void eval_kernel_radial(const KernelSpec& spec, std::span<const double> squared_norms,
                        std::span<double> out) {
  const std::size_t m = squared_norms.size();
  const double* in = squared_norms.data();
  double* o = out.data();
  const double s2 = spec.scale * spec.scale;
  const double g = spec.gamma;
  const double half_g = 0.5 * g;

  switch (spec.family) {
    case KernelFamily::Stable:
      if (g == 2.0) {
        for (std::size_t j = 0; j < m; ++j) o[j] = std::exp(-s2 * in[j]);
      } else if (g == 1.0) {
        for (std::size_t j = 0; j < m; ++j) o[j] = std::exp(-std::sqrt(s2 * in[j]));
      } else {
        for (std::size_t j = 0; j < m; ++j) {
          const double u = s2 * in[j];
          o[j] = u > 0.0 ? std::exp(-std::exp(half_g * std::log(u))) : 1.0;
        }
      }
      return;
    case KernelFamily::Laplace:
      if (g == 1.0) {
        for (std::size_t j = 0; j < m; ++j) o[j] = 1.0 / (1.0 + s2 * in[j]);
      } else if (g == 4.0) {
        for (std::size_t j = 0; j < m; ++j) {
          const double r = 1.0 / (1.0 + s2 * in[j]);
          const double r2 = r * r;
          o[j] = r2 * r2;
        }
      } else {
        for (std::size_t j = 0; j < m; ++j) o[j] = std::exp(-g * std::log1p(s2 * in[j]));
      }
      return;
    case KernelFamily::Energy:
      if (g == 2.0) {
        for (std::size_t j = 0; j < m; ++j) o[j] = -s2 * in[j];
      } else if (g == 1.0) {
        for (std::size_t j = 0; j < m; ++j) o[j] = -std::sqrt(s2 * in[j]);
      } else {
        for (std::size_t j = 0; j < m; ++j) {
          const double u = s2 * in[j];
          o[j] = u > 0.0 ? -std::exp(half_g * std::log(u)) : 0.0;
        }
      }
      return;
  }
}

}  // namespace cfeq
