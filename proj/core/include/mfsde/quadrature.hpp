#pragma once

#include <functional>

namespace mfsde::quad {

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Adaptive integration on a finite interval; tolerates integrable
/// singularities at either endpoint (double-exponential substitution).
Result integrate(const Integrand& f, double a, double b, double rel_tol = 1e-10);

/// Integration over [a, infinity).
Result integrate_to_infinity(const Integrand& f, double a, double rel_tol = 1e-10);

/// Adaptive Gauss-Kronrod on a smooth finite interval.
Result integrate_smooth(const Integrand& f, double a, double b,
                        double rel_tol = 1e-12);

/// Maximise a unimodal function on [a, b] (Brent). Returns {argmax, max}.
struct Extremum {
  double x = 0.0;
  double value = 0.0;
};
Extremum maximize(const Integrand& f, double a, double b);

}  // namespace mfsde::quad
