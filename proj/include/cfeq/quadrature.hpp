#pragma once

#include <functional>
#include <string>

namespace cfeq {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  ///< Gauss-Kronrod error estimate (absolute)
};

/// Adaptive 61-point Gauss-Kronrod on [a, b]; b may be +infinity.
/// Subdivision stops once the error estimate falls below rel_tol times the
/// L1 estimate; throws NumericalError when it still exceeds abs_tol.
[[nodiscard]] QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                                         double abs_tol, const std::string& what = "integral",
                                         double rel_tol = 1e-12);

/// Nested adaptive rule over the rectangle [a1, b1] x [a2, b2].
[[nodiscard]] QuadratureResult integrate_2d(const std::function<double(double, double)>& f,
                                            double a1, double b1, double a2, double b2,
                                            double abs_tol, const std::string& what = "integral");

}  // namespace cfeq
