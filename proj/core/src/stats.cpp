#include "mfsde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfsde::stats {
namespace {

double ks_p_value(double d, double effective_n) {
  const double sn = std::sqrt(effective_n);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

}  // namespace

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of empty sample");
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("variance needs two samples");
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return acc / static_cast<double>(x.size() - 1);
}

double standard_error(std::span<const double> x) {
  return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

BatchMeans batch_means(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 4) throw std::invalid_argument("batch means need at least 4 samples");
  const auto k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  const std::size_t size = n / k;
  std::vector<double> means(k);
  for (std::size_t b = 0; b < k; ++b) {
    const std::size_t lo = b * size;
    const std::size_t hi = b + 1 == k ? n : lo + size;
    means[b] = mean(x.subspan(lo, hi - lo));
  }
  BatchMeans out;
  out.mean = mean(x);
  out.batches = k;
  // Batches are nearly equal in size; the standard error of the grand mean
  // is that of the mean of k batch means.
  out.standard_error = std::sqrt(variance(means) / static_cast<double>(k));
  return out;
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("KS test needs samples");
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, ks_p_value(d, na * nb / (na + nb))};
}

KsResult ks_one_sample(std::span<const double> x,
                       const std::function<double(double)>& cdf) {
  if (x.empty()) throw std::invalid_argument("KS test needs samples");
  std::vector<double> a(x.begin(), x.end());
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n)};
}

}  // namespace mfsde::stats
