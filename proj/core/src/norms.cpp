#include "mfsde/norms.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "increment_integrals.hpp"
#include "mfsde/csv.hpp"
#include "power_kernel.hpp"

namespace mfsde {
namespace {

void require_order(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("fractional order alpha must lie in (0, 1)");
  }
}

double seminorm_on_nodes(std::span<const double> f, double h, double alpha) {
  const std::size_t n = f.size() - 1;
  const detail::PowerKernel kernel(h, alpha - 2.0, n);
  std::vector<double> holder_weight(n);
  for (std::size_t m = 0; m < n; ++m) {
    holder_weight[m] = std::pow(static_cast<double>(m + 1) * h, alpha - 1.0);
  }

  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fu = f[i];
    double inner = 0.0;
    for (std::size_t j = i; j < n; ++j) {
      const std::size_t m = j - i;
      const double d = f[j + 1] - f[j];
      const double a = m == 0 ? 0.0 : fu - f[j] + d * static_cast<double>(m);
      inner += kernel.absolute(m, a, -d / h);
      const double value = std::abs(f[j + 1] - fu) * holder_weight[m] + inner;
      best = std::max(best, value);
    }
  }
  return best;
}

}  // namespace

void validate(const NormParams& p) {
  require_order(p.alpha);
  if (!(p.lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(p.eta > 0.0 && p.eta < 0.5 - p.alpha)) {
    throw std::invalid_argument("eta must lie in (0, 1/2 - alpha)");
  }
}

double norm_t(const SamplePath& f, double t, double alpha) {
  require_order(alpha);
  const std::size_t i = f.grid.node_index(t);
  if (i == 0) return 0.0;
  const double h = f.grid.dt();
  const detail::PowerKernel kernel(h, -1.0 - alpha, i);
  const auto& v = f.values;
  double acc = 0.0;
  for (std::size_t m = 0; m < i; ++m) {
    const std::size_t j = i - 1 - m;
    const double d = v[j] - v[j + 1];
    const double a = m == 0 ? 0.0 : v[i] - v[j + 1] + d * static_cast<double>(m);
    acc += kernel.absolute(m, a, -d / h);
  }
  return acc;
}

std::vector<double> norm_t_profile(const SamplePath& f, double alpha) {
  require_order(alpha);
  return detail::backward_increment_integrals(f.values, f.grid.dt(), -1.0 - alpha,
                                              true);
}

WeightedNorms weighted_norms(const SamplePath& f, double lambda, double t,
                             double alpha) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  require_order(alpha);
  const std::size_t last = f.grid.node_index(t);
  std::vector<double> profile(1, 0.0);
  if (last > 0) {
    profile = detail::backward_increment_integrals(
        std::span<const double>(f.values.data(), last + 1), f.grid.dt(),
        -1.0 - alpha, true);
  }
  WeightedNorms out;
  for (std::size_t i = 0; i <= last; ++i) {
    const double w = std::exp(-lambda * f.grid.time(i));
    out.norm_lambda = std::max(out.norm_lambda, w * std::abs(f.values[i]));
    out.norm_1_lambda = std::max(out.norm_1_lambda, w * profile[i]);
  }
  return out;
}

double norm_inf(const SamplePath& f, double t, double alpha) {
  const auto w = weighted_norms(f, 0.0, t, alpha);
  return w.norm_lambda + w.norm_1_lambda;
}

double norm_0_interval(const SamplePath& f, double s, double t, double alpha) {
  require_order(alpha);
  if (!(s < t)) throw std::invalid_argument("norm_0_interval requires s < t");
  const std::size_t first = f.grid.node_index(s);
  const std::size_t last = f.grid.node_index(t);
  if (first >= last) throw std::invalid_argument("norm_0_interval requires s < t");
  return seminorm_on_nodes(
      std::span<const double>(f.values.data() + first, last - first + 1),
      f.grid.dt(), alpha);
}

double norm_0_interval(const GridFunction& f, double alpha) {
  require_order(alpha);
  return seminorm_on_nodes(f.values, f.step, alpha);
}

double grr_functional(const SamplePath& f, double eta, double horizon,
                      double alpha) {
  if (!(eta > 0.0 && eta < 0.5 - alpha)) {
    throw std::invalid_argument("eta must lie in (0, 1/2 - alpha)");
  }
  const std::size_t n = f.grid.node_index(horizon);
  if (n == 0) return 0.0;
  const double h = f.grid.dt();
  const double p_inc = 2.0 / eta;
  const double p_dist = 1.0 / eta;

  std::vector<double> log_weight(n + 1, std::log(h));
  log_weight[0] = log_weight[n] = std::log(0.5 * h);
  std::vector<double> log_dist(n + 1, 0.0);
  for (std::size_t m = 1; m <= n; ++m) log_dist[m] = std::log(static_cast<double>(m) * h);

  // Streaming log-sum-exp over the off-diagonal pairs (each unordered pair
  // counted twice).
  double top = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      const double inc = std::abs(f.values[j] - f.values[i]);
      if (inc == 0.0) continue;
      const double l = p_inc * std::log(inc) - p_dist * log_dist[j - i] +
                       log_weight[i] + log_weight[j];
      if (l > top) {
        sum = sum * std::exp(top - l) + 1.0;
        top = l;
      } else {
        sum += std::exp(l - top);
      }
    }
  }
  if (sum == 0.0) return 0.0;
  const double log_total = std::log(2.0) + top + std::log(sum);
  return std::exp(0.5 * eta * log_total);
}

double capital_lambda(const SamplePath& bh, double horizon, double alpha) {
  return std::max(norm_0_interval(bh, 0.0, horizon, alpha), 1.0);
}

NormReport compute_norm_report(const SamplePath& f, const NormParams& params,
                               double s, double t, std::string path_id) {
  validate(params);
  NormReport r;
  r.path_id = std::move(path_id);
  r.interval_start = s;
  r.interval_end = t;
  r.time = t;
  r.params = params;
  r.norm_t = norm_t(f, t, params.alpha);
  const auto w = weighted_norms(f, params.lambda, t, params.alpha);
  r.norm_lambda = w.norm_lambda;
  r.norm_1_lambda = w.norm_1_lambda;
  r.norm_inf = norm_inf(f, t, params.alpha);
  r.norm_0_interval = norm_0_interval(f, s, t, params.alpha);
  r.xi_eta = grr_functional(f, params.eta, t, params.alpha);
  return r;
}

void write_norm_report_header(std::ostream& os) {
  os << "path_id,s,t,alpha,lambda,eta,norm_t,norm_lambda,norm_1_lambda,norm_inf,"
        "norm_0_interval,xi_eta\n";
}

void write_norm_report_row(std::ostream& os, const NormReport& r) {
  using csv::format_double;
  os << r.path_id << ',' << format_double(r.interval_start) << ','
     << format_double(r.interval_end) << ',' << format_double(r.params.alpha) << ','
     << format_double(r.params.lambda) << ',' << format_double(r.params.eta) << ','
     << format_double(r.norm_t) << ',' << format_double(r.norm_lambda) << ','
     << format_double(r.norm_1_lambda) << ',' << format_double(r.norm_inf) << ','
     << format_double(r.norm_0_interval) << ',' << format_double(r.xi_eta) << '\n';
}

}  // namespace mfsde
