#include "cfeq/quadrature.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cfeq/errors.hpp"

namespace cfeq {
namespace {

constexpr unsigned kMaxDepth = 20;
using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;

[[noreturn]] void fail(const std::string& what, double value, double error, double tol) {
  std::ostringstream os;
  os << what << ": quadrature did not converge (value " << value << ", error estimate " << error
     << ", tolerance " << tol << ')';
  throw NumericalError(os.str());
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, const std::string& what, double rel_tol) {
  double error = 0.0;
  // Boost's tolerance is relative to the running estimate; check the absolute
  // estimate afterwards.
  const double value = Rule::integrate(f, a, b, kMaxDepth, rel_tol, &error);
  if (!std::isfinite(value) || error > abs_tol) fail(what, value, error, abs_tol);
  return {value, error};
}

QuadratureResult integrate_2d(const std::function<double(double, double)>& f, double a1,
                              double b1, double a2, double b2, double abs_tol,
                              const std::string& what) {
  const double inner_tol = abs_tol / (4.0 * std::max(1.0, b1 - a1));
  double worst_inner = 0.0;
  auto outer = [&](double t1) {
    const QuadratureResult r =
        integrate([&](double t2) { return f(t1, t2); }, a2, b2, inner_tol, what);
    worst_inner = std::max(worst_inner, r.error);
    return r.value;
  };
  QuadratureResult r = integrate(outer, a1, b1, abs_tol / 2.0, what);
  r.error += worst_inner * (b1 - a1);
  if (r.error > abs_tol) fail(what, r.value, r.error, abs_tol);
  return r;
}

}  // namespace cfeq
