#pragma once

// Product-integration tables for the weakly singular power kernels
// r^e that appear in every fractional derivative and norm. All routines
// integrate a piecewise-linear interpolant exactly against r^e.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace mfsde::detail {

class PowerKernel {
 public:
  /// Tables for cells [m h, (m + 1) h], m = 0..cells-1, of the kernel r^e.
  PowerKernel(double step, double exponent, std::size_t cells)
      : h_(step), e_(exponent), p_(cells), q_(cells) {
    for (std::size_t m = 0; m < cells; ++m) {
      const double r0 = static_cast<double>(m) * h_;
      const double r1 = static_cast<double>(m + 1) * h_;
      p_[m] = (m == 0 && e_ <= -1.0) ? std::numeric_limits<double>::infinity()
                                     : antiderivative0(r1) - antiderivative0(r0);
      q_[m] = antiderivative1(r1) - antiderivative1(r0);
    }
  }

  double step() const { return h_; }
  double exponent() const { return e_; }

  /// Integral of (A + B r) r^e over cell m. For m = 0 the caller must pass
  /// A = 0 whenever the kernel is not integrable at the origin.
  double linear(std::size_t m, double a, double b) const {
    if (m == 0 && a == 0.0) return b * q_[0];
    return a * p_[m] + b * q_[m];
  }

  /// Integral of |A + B r| r^e over cell m, splitting at the root of A + B r
  /// when it falls inside the cell.
  double absolute(std::size_t m, double a, double b) const {
    if (m == 0 && a == 0.0) return std::abs(b) * q_[0];
    const double r0 = static_cast<double>(m) * h_;
    const double r1 = static_cast<double>(m + 1) * h_;
    const double v0 = a + b * r0;
    const double v1 = a + b * r1;
    if (v0 * v1 >= 0.0) return std::abs(a * p_[m] + b * q_[m]);
    const double root = -a / b;
    const double f0 = primitive(a, b, r0);
    const double fr = primitive(a, b, root);
    const double f1 = primitive(a, b, r1);
    return std::abs(fr - f0) + std::abs(f1 - fr);
  }

  /// Integral of r^e over [0, (m + 1) h] split as the table of cell m.
  double cell_p(std::size_t m) const { return p_[m]; }
  double cell_q(std::size_t m) const { return q_[m]; }

 private:
  double antiderivative0(double r) const {
    if (r == 0.0) return 0.0;
    return std::pow(r, e_ + 1.0) / (e_ + 1.0);
  }
  double antiderivative1(double r) const {
    if (r == 0.0) return 0.0;
    return std::pow(r, e_ + 2.0) / (e_ + 2.0);
  }
  double primitive(double a, double b, double r) const {
    return a * antiderivative0(r) + b * antiderivative1(r);
  }

  double h_;
  double e_;
  std::vector<double> p_;
  std::vector<double> q_;
};

}  // namespace mfsde::detail
