#pragma once

#include <cstddef>
#include <optional>

#include "mfsde/grid.hpp"

namespace mfsde {

/// Hurst index, fractional order and time-Hölder exponent of the
/// coefficients. Valid when 1/2 < H < 1, 1 - H < alpha < 1/2 and
/// 1 - H < beta < 1.
struct FracParams {
  double hurst = 0.75;
  double alpha = default_alpha(0.75);
  double beta = 0.5;

  /// Midpoint of the admissible interval (1 - H, 1/2).
  static constexpr double default_alpha(double hurst) {
    return 0.5 * ((1.0 - hurst) + 0.5);
  }
};

/// Throws std::invalid_argument naming the violated constraint.
void validate(const FracParams& p);
/// Checks only 1 - H < alpha < 1/2.
void validate_alpha(double alpha, double hurst);

enum class Side { left, right };

/// D^alpha_{a+} f (left) or D^{1-alpha}_{b-} g_{b-} (right) at the nodes of
/// a grid function. The node at which the operator is undefined (x = a for
/// the left side, x = b for the right side) holds NaN.
struct FracDerivative {
  double order = 0.0;
  Side side = Side::left;
  GridFunction values;

  std::size_t undefined_node() const {
    return side == Side::left ? 0 : values.size() - 1;
  }
};

/// Left Riemann-Liouville (Marchaud) derivative of order alpha at every node
/// x > a:
///   (1/Gamma(1-a)) [ f(x)(x-a)^{-a} + a * int_a^x (f(x)-f(u))(x-u)^{-1-a} du ].
/// The singular integral is evaluated by product integration, exact for
/// piecewise-linear f.
FracDerivative rl_left_derivative(const GridFunction& f, double alpha);

/// Right derivative of order 1 - alpha applied to g_{b-} = g - g(b), in the
/// real convention (complex phase dropped):
///   (1/Gamma(a)) [ g_{b-}(x)(b-x)^{a-1} + (1-a) int_x^b (g(x)-g(u))(u-x)^{a-2} du ].
FracDerivative rl_right_derivative(const GridFunction& g, double alpha);

/// Generalised Lebesgue-Stieltjes integral int_a^b f dg built from the pair
/// of fractional derivatives. When `integrator_hurst` is given, alpha is
/// additionally required to lie in (1 - H, 1/2).
///
/// The outer dx-integral splits every cell into `subdivisions` sub-cells; the
/// derivatives of the piecewise-linear interpolants of f and g are exact at
/// every sub-node.
double gls_integral(const GridFunction& f, const GridFunction& g, double alpha,
                    std::optional<double> integrator_hurst = std::nullopt,
                    std::size_t subdivisions = 2);

/// Forward Riemann-Stieltjes sum sum_k f(t_k)(g(t_{k+1}) - g(t_k)).
double forward_sum_integral(const GridFunction& f, const GridFunction& g);

/// C * Lambda * int_a^b ( |f(s)|(s-a)^{-alpha}
///                        + int_a^s |f(s)-f(u)|(s-u)^{-1-alpha} du ) ds.
double integral_bound_rhs(const GridFunction& f, double capital_lambda,
                          double alpha, double constant = 1.0);

}  // namespace mfsde
