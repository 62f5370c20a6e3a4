#include "mfsde/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

namespace mfsde::quad {

Result integrate(const Integrand& f, double a, double b, double rel_tol) {
  if (a == b) return {0.0, 0.0, true};
  boost::math::quadrature::tanh_sinh<double> integrator(15);
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double v = integrator.integrate(f, a, b, rel_tol, &err, &l1, &levels);
  const bool ok = std::isfinite(v) && err <= std::max(1e3 * rel_tol, 1e-8) * std::max(l1, 1e-300);
  return {v, err, ok};
}

Result integrate_to_infinity(const Integrand& f, double a, double rel_tol) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0;
  double l1 = 0.0;
  const double v = integrator.integrate(
      [&](double x) { return f(x); }, a, std::numeric_limits<double>::infinity(),
      rel_tol, &err, &l1);
  const bool ok = std::isfinite(v) && err <= std::max(1e3 * rel_tol, 1e-8) * std::max(l1, 1e-300);
  return {v, err, ok};
}

Result integrate_smooth(const Integrand& f, double a, double b, double rel_tol) {
  if (a == b) return {0.0, 0.0, true};
  double err = 0.0;
  double l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, 30, rel_tol, &err, &l1);
  const bool ok = std::isfinite(v) && err <= std::max(1e3 * rel_tol, 1e-8) * std::max(l1, 1e-300);
  return {v, err, ok};
}

Extremum maximize(const Integrand& f, double a, double b) {
  const auto r = boost::math::tools::brent_find_minima(
      [&](double x) { return -f(x); }, a, b, std::numeric_limits<double>::digits / 2);
  return {r.first, -r.second};
}

}  // namespace mfsde::quad
