#pragma once

#include <span>
#include <vector>

namespace mfsde::detail {

/// For every node i of a uniform grid with spacing h:
///   int_{x_0}^{x_i} (f(x_i) - f(u)) (x_i - u)^e du        (signed), or
///   int_{x_0}^{x_i} |f(x_i) - f(u)| (x_i - u)^e du        (absolute),
/// with f the piecewise-linear interpolant of `values`. Entry 0 is 0.
std::vector<double> backward_increment_integrals(std::span<const double> values,
                                                 double h, double exponent,
                                                 bool absolute);

/// For every node i:
///   int_{x_i}^{x_n} (f(x_i) - f(u)) (u - x_i)^e du   (signed or absolute).
/// Entry n is 0.
std::vector<double> forward_increment_integrals(std::span<const double> values,
                                                double h, double exponent,
                                                bool absolute);

}  // namespace mfsde::detail
