#include "mfsde/frac_calc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "increment_integrals.hpp"
#include "power_kernel.hpp"

namespace mfsde {
namespace detail {

std::vector<double> backward_increment_integrals(std::span<const double> f,
                                                 double h, double exponent,
                                                 bool absolute) {
  const std::size_t n = f.size() - 1;
  const PowerKernel kernel(h, exponent, n);
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    double acc = 0.0;
    // Cell j = [x_j, x_{j+1}] sits at distance offset m = i - 1 - j from x_i.
    for (std::size_t m = 0; m < i; ++m) {
      const std::size_t j = i - 1 - m;
      const double d = f[j] - f[j + 1];
      const double a = m == 0 ? 0.0 : f[i] - f[j + 1] + d * static_cast<double>(m);
      const double b = -d / h;
      acc += absolute ? kernel.absolute(m, a, b) : kernel.linear(m, a, b);
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> forward_increment_integrals(std::span<const double> f,
                                                double h, double exponent,
                                                bool absolute) {
  const std::size_t n = f.size() - 1;
  const PowerKernel kernel(h, exponent, n);
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = i; j < n; ++j) {
      const std::size_t m = j - i;
      const double d = f[j + 1] - f[j];
      const double a = m == 0 ? 0.0 : f[i] - f[j] + d * static_cast<double>(m);
      const double b = -d / h;
      acc += absolute ? kernel.absolute(m, a, b) : kernel.linear(m, a, b);
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace detail

namespace {

void require_order(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("fractional order alpha must lie in (0, 1)");
  }
}

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

GridFunction refined(const GridFunction& f, std::size_t r) {
  std::vector<double> v;
  v.reserve(f.cells() * r + 1);
  for (std::size_t i = 0; i < f.cells(); ++i) {
    const double d = f.values[i + 1] - f.values[i];
    for (std::size_t j = 0; j < r; ++j) {
      v.push_back(f.values[i] + d * static_cast<double>(j) / static_cast<double>(r));
    }
  }
  v.push_back(f.values.back());
  return GridFunction(f.origin, f.step / static_cast<double>(r), std::move(v));
}

}  // namespace

void validate_alpha(double alpha, double hurst) {
  if (!(alpha > 1.0 - hurst && alpha < 0.5)) {
    throw std::invalid_argument("alpha must lie in (1-H, 1/2)");
  }
}

void validate(const FracParams& p) {
  if (!(p.hurst > 0.5 && p.hurst < 1.0)) {
    throw std::invalid_argument("H must lie in (1/2, 1)");
  }
  validate_alpha(p.alpha, p.hurst);
  if (!(p.beta > 1.0 - p.hurst && p.beta < 1.0)) {
    throw std::invalid_argument("beta must lie in (1-H, 1)");
  }
}

FracDerivative rl_left_derivative(const GridFunction& f, double alpha) {
  require_order(alpha);
  const double h = f.step;
  const auto integrals =
      detail::backward_increment_integrals(f.values, h, -1.0 - alpha, false);
  const double norm = 1.0 / std::tgamma(1.0 - alpha);
  std::vector<double> d(f.size());
  d[0] = nan;
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double x = static_cast<double>(i) * h;
    d[i] = norm * (f.values[i] * std::pow(x, -alpha) + alpha * integrals[i]);
  }
  return FracDerivative{alpha, Side::left, GridFunction(f.origin, h, std::move(d))};
}

FracDerivative rl_right_derivative(const GridFunction& g, double alpha) {
  require_order(alpha);
  const double h = g.step;
  const std::size_t n = g.cells();
  const auto integrals =
      detail::forward_increment_integrals(g.values, h, alpha - 2.0, false);
  const double norm = 1.0 / std::tgamma(alpha);
  const double gb = g.values[n];
  std::vector<double> d(g.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double dist = static_cast<double>(n - i) * h;
    d[i] = norm * ((g.values[i] - gb) * std::pow(dist, alpha - 1.0) +
                   (1.0 - alpha) * integrals[i]);
  }
  d[n] = nan;
  return FracDerivative{1.0 - alpha, Side::right,
                        GridFunction(g.origin, h, std::move(d))};
}

double gls_integral(const GridFunction& f_in, const GridFunction& g_in, double alpha,
                    std::optional<double> integrator_hurst, std::size_t subdivisions) {
  require_same_grid(f_in, g_in);
  require_order(alpha);
  if (integrator_hurst) validate_alpha(alpha, *integrator_hurst);
  if (subdivisions == 0) throw std::invalid_argument("subdivisions must be >= 1");
  const GridFunction f = subdivisions == 1 ? f_in : refined(f_in, subdivisions);
  const GridFunction g = subdivisions == 1 ? g_in : refined(g_in, subdivisions);

  const auto left = rl_left_derivative(f, alpha);
  const auto right = rl_right_derivative(g, alpha);
  const std::size_t n = f.cells();
  const double h = f.step;

  // phi(x) = D^a f(x) * D^{1-a} g_{b-}(x) * (x - a)^a is bounded on [a, b]:
  // at x = a it tends to f(a) R(a) / Gamma(1 - a), and R(b) = 0 for any
  // integrator that is Hölder of order > 1 - a.
  std::vector<double> phi(n + 1);
  phi[0] = f.values[0] / std::tgamma(1.0 - alpha) * right.values.values[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double x = static_cast<double>(i) * h;
    phi[i] = left.values.values[i] * right.values.values[i] * std::pow(x, alpha);
  }
  phi[n] = 0.0;

  // Product-integrate (x - a)^{-a} against the linear interpolant of phi.
  const detail::PowerKernel kernel(h, -alpha, n);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double slope = (phi[j + 1] - phi[j]) / h;
    const double r0 = static_cast<double>(j) * h;
    acc += kernel.linear(j, phi[j] - slope * r0, slope);
  }
  // The two real-convention phase factors combine to (-1)^alpha (-1)^{1-alpha} = -1.
  return -acc;
}

double forward_sum_integral(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    acc += f.values[k] * (g.values[k + 1] - g.values[k]);
  }
  return acc;
}

double integral_bound_rhs(const GridFunction& f, double capital_lambda,
                          double alpha, double constant) {
  require_order(alpha);
  const std::size_t n = f.cells();
  const double h = f.step;

  const detail::PowerKernel kernel(h, -alpha, n);
  double boundary = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double a0 = std::abs(f.values[j]);
    const double a1 = std::abs(f.values[j + 1]);
    const double slope = (a1 - a0) / h;
    boundary += kernel.linear(j, a0 - slope * static_cast<double>(j) * h, slope);
  }

  const auto increments =
      detail::backward_increment_integrals(f.values, h, -1.0 - alpha, true);
  double increment_part = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    increment_part += 0.5 * h * (increments[j] + increments[j + 1]);
  }
  return constant * capital_lambda * (boundary + increment_part);
}

}  // namespace mfsde
