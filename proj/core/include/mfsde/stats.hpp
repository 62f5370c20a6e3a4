#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mfsde::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
/// Plain standard error sqrt(var / n).
double standard_error(std::span<const double> x);

struct BatchMeans {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t batches = 0;
};

/// Mean with a batch-means standard error over floor(sqrt(n)) contiguous
/// batches (the remainder is folded into the last batch).
BatchMeans batch_means(std::span<const double> x);

/// Kolmogorov limiting survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2k^2 lambda^2}.
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test (asymptotic p-value with the
/// Stephens small-sample correction).
KsResult ks_two_sample(std::span<const double> x, std::span<const double> y);

/// One-sample test against a continuous CDF.
KsResult ks_one_sample(std::span<const double> x,
                       const std::function<double(double)>& cdf);

}  // namespace mfsde::stats
