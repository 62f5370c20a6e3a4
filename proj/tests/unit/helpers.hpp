#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace testing {

/// Sample covariance of (x, y) with the standard error of the product mean.
struct CovEstimate {
  double value = 0.0;
  double se = 0.0;
};

inline CovEstimate covariance(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  std::vector<double> prod(x.size());
  double mean = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    prod[i] = (x[i] - mx) * (y[i] - my);
    mean += prod[i];
  }
  mean /= m;
  double var = 0;
  for (double p : prod) var += (p - mean) * (p - mean);
  var /= (m - 1);
  return {mean * m / (m - 1), std::sqrt(var / m)};
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

}  // namespace testing
