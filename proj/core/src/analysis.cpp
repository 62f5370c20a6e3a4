#include "mfsde/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <span>
#include <thread>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/lambert_w.hpp>

#include "mfsde/frac_calc.hpp"
#include "mfsde/norms.hpp"
#include "mfsde/quadrature.hpp"
#include "mfsde/stats.hpp"

namespace mfsde {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned threads) {
  if (count == 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));

  std::atomic<std::size_t> next{0};
  std::mutex guard;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------

std::size_t Ensemble::excluded() const {
  return static_cast<std::size_t>(std::count_if(
      replicas.begin(), replicas.end(), [](const Replica& r) { return !r.ok; }));
}

std::vector<double> Ensemble::sup_values() const {
  std::vector<double> out;
  out.reserve(replicas.size());
  for (const auto& r : replicas) {
    if (r.ok) out.push_back(r.sup_abs);
  }
  return out;
}

Ensemble simulate_ensemble(const EnsembleSpec& spec) {
  validate(spec.grid);
  Ensemble ens;
  ens.spec = spec;
  ens.replicas.resize(spec.replicas);
  parallel_for(
      spec.replicas,
      [&](std::size_t r) {
        Replica& rep = ens.replicas[r];
        rep.index = r;
        DrivingTriple d = gen_driving_triple(spec.grid, spec.hurst, spec.rate,
                                             spec.marks, spec.seed.replica(r),
                                             spec.dependence);
        rep.jump_count = d.jumps.count();
        try {
          SolutionPath s = solve_with_jumps(spec.model, spec.x0, d.wiener, d.fbm, d.jumps);
          rep.sup_abs = s.sup_abs();
          rep.terminal = s.terminal();
          if (spec.keep_paths) rep.solution = std::move(s);
        } catch (const SolverError& e) {
          rep.ok = false;
          rep.error = e.what();
        }
        if (spec.keep_paths) rep.drivers = std::move(d);
      },
      spec.threads);
  return ens;
}

// ---------------------------------------------------------------------------

bool MomentTable::stable() const {
  return std::all_of(rows.begin(), rows.end(), [](const MomentRow& r) { return r.stable; });
}

MomentTable estimate_moments(const Ensemble& ens, const std::vector<double>& p_list,
                             const Thresholds& th) {
  const std::vector<double> sup = ens.sup_values();
  if (sup.size() < 100) {
    throw std::invalid_argument("moment estimation needs at least 100 finished replicas");
  }
  MomentTable table;
  table.total = ens.replicas.size();
  table.excluded = ens.excluded();

  std::vector<double> powered(sup.size());
  for (double p : p_list) {
    if (!(p > 0.0)) throw std::invalid_argument("moment orders must be positive");
    for (std::size_t i = 0; i < sup.size(); ++i) powered[i] = std::pow(sup[i], p);
    const auto full = stats::batch_means(powered);
    const auto half =
        stats::batch_means(std::span<const double>(powered.data(), powered.size() / 2));
    MomentRow row;
    row.p = p;
    row.mean = full.mean;
    row.standard_error = full.standard_error;
    row.half_mean = half.mean;
    row.half_standard_error = half.standard_error;
    row.replicas = sup.size();
    const double combined = std::hypot(full.standard_error, half.standard_error);
    row.stable = std::isfinite(full.mean) &&
                 std::abs(full.mean - half.mean) <= th.moment_stability_se * combined;
    table.rows.push_back(row);
  }

  std::vector<MomentRow> by_p = table.rows;
  std::sort(by_p.begin(), by_p.end(),
            [](const MomentRow& a, const MomentRow& b) { return a.p < b.p; });
  for (std::size_t i = 1; i < by_p.size(); ++i) {
    const double lo = std::pow(by_p[i - 1].mean, 1.0 / by_p[i - 1].p);
    const double hi = std::pow(by_p[i].mean, 1.0 / by_p[i].p);
    if (hi < lo * (1.0 - 1e-12)) table.power_means_monotone = false;
  }
  return table;
}

// ---------------------------------------------------------------------------

TailReport tail_diagnostic(const std::vector<double>& sup_values, double p_max) {
  TailReport rep;
  rep.p_max = p_max;
  const std::size_t m = sup_values.size();
  if (m < 2) throw std::invalid_argument("tail diagnostic needs samples");
  std::vector<double> x(sup_values);
  std::sort(x.begin(), x.end(), std::greater<>());
  const auto k = std::max<std::size_t>(
      3, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m)))));
  rep.order_statistics = std::min(k, m);

  std::vector<double> lx, ls;
  for (std::size_t i = 0; i < rep.order_statistics; ++i) {
    if (!(x[i] > 0.0)) break;
    lx.push_back(std::log(x[i]));
    ls.push_back(std::log(static_cast<double>(i + 1) / static_cast<double>(m)));
  }
  const double mx = lx.empty() ? 0.0 : stats::mean(lx);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * ls[i];
  }
  // A flat top (all order statistics equal) means no upper tail at all.
  const double spread = lx.empty() ? 0.0 : lx.front() - lx.back();
  if (lx.size() < 3 || spread <= 1e-12 * std::max(1.0, std::abs(mx))) {
    rep.slope = std::numeric_limits<double>::infinity();
  } else {
    rep.slope = -sxy / sxx;
  }
  rep.supported = rep.slope > p_max + 1.0;
  return rep;
}

TailReport tail_diagnostic(const Ensemble& ens, double p_max) {
  return tail_diagnostic(ens.sup_values(), p_max);
}

// ---------------------------------------------------------------------------

double minimal_k(double ratio, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("minimal_k needs c > 0");
  if (ratio <= 0.0) return 0.0;
  return boost::math::lambert_w0(ratio * c) / c;
}

LemmaReport verify_pathwise_lemma(const Ensemble& ens, double alpha, const Thresholds& th) {
  if (ens.spec.rate != 0.0) {
    throw std::invalid_argument("the pathwise lemma applies to jump-free ensembles");
  }
  const std::size_t m = ens.replicas.size();
  LemmaReport rep;
  rep.paths.resize(m);
  std::vector<char> ok(m, 0);
  const double horizon = ens.spec.grid.horizon;

  parallel_for(
      m,
      [&](std::size_t r) {
        const Replica& rp = ens.replicas[r];
        if (!rp.ok) return;
        if (!rp.solution || !rp.drivers) {
          throw std::invalid_argument("lemma verification needs an ensemble with keep_paths");
        }
        const SamplePath& x = rp.solution->path;
        LemmaPath& lp = rep.paths[r];
        lp.lhs = norm_inf(x, horizon, alpha);
        lp.capital_lambda = capital_lambda(rp.drivers->fbm, horizon, alpha);
        const SamplePath ib =
            ito_integral_path(coefficient_values(ens.spec.model.b, x), rp.drivers->wiener);
        lp.jb = norm_inf(ib, horizon, alpha);
        const double c = std::pow(lp.capital_lambda, 1.0 / (1.0 - alpha));
        lp.k_required = minimal_k(lp.lhs / (1.0 + lp.jb), c);
        ok[r] = 1;
      },
      ens.spec.threads);

  rep.training = m / 2;
  double running = 0.0;
  for (std::size_t r = 0; r < rep.training; ++r) {
    if (ok[r]) running = std::max(running, rep.paths[r].k_required);
    rep.k_envelope.push_back(running);
  }
  rep.k_fit = running;

  std::size_t held = 0, satisfied = 0;
  for (std::size_t r = rep.training; r < m; ++r) {
    if (!ok[r]) continue;
    ++held;
    const LemmaPath& lp = rep.paths[r];
    if (rep.k_fit > 0.0 &&
        lp.lhs <= pathwise_bound_rhs(lp.capital_lambda, lp.jb, alpha, rep.k_fit)) {
      ++satisfied;
    } else if (rep.k_fit == 0.0 && lp.lhs <= 0.0) {
      ++satisfied;
    }
  }
  rep.holdout_rate = held == 0 ? 0.0 : static_cast<double>(satisfied) / held;
  rep.pass = held > 0 && rep.holdout_rate >= th.holdout_rate;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

// int_0^s e^{lambda (u - s)} u^{-alpha} du
// u = s v: s^{1-alpha} int_0^1 e^{lambda s (v-1)} v^{-alpha} dv.
quad::Result weighted_kernel(double s, double lambda, double alpha) {
  auto r = quad::integrate(
      [=](double v) { return std::exp(lambda * s * (v - 1.0)) * std::pow(v, -alpha); }, 0.0,
      1.0, 1e-12);
  const double scale = std::pow(s, 1.0 - alpha);
  r.value *= scale;
  r.error_estimate *= scale;
  return r;
}

WeightedKernelRow weighted_row(double lambda, double alpha, double horizon) {
  WeightedKernelRow row;
  row.lambda = lambda;
  row.bound = std::tgamma(1.0 - alpha) * std::pow(lambda, alpha - 1.0);

  // Log-spaced scan over (0, t], then Brent on the best bracket.
  constexpr int scan = 121;
  std::vector<double> s(scan);
  std::vector<double> v(scan);
  for (int k = 0; k < scan; ++k) {
    s[k] = horizon * std::pow(10.0, -8.0 + 8.0 * k / (scan - 1));
    const auto r = weighted_kernel(s[k], lambda, alpha);
    v[k] = r.value;
    row.converged = row.converged && r.converged;
  }
  const auto best = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  row.sup_value = v[best];
  row.argmax = s[best];
  const double lo = s[std::max(0, best - 1)];
  const double hi = s[std::min(scan - 1, best + 1)];
  if (hi > lo) {
    const auto ext = quad::maximize(
        [&](double x) { return weighted_kernel(x, lambda, alpha).value; }, lo, hi);
    if (ext.value > row.sup_value) {
      row.sup_value = ext.value;
      row.argmax = ext.x;
    }
  }
  row.ratio = row.sup_value / row.bound;
  return row;
}

BetaKernelRow beta_row(double u, double t, double alpha) {
  BetaKernelRow row;
  row.u = u;
  row.t = t;
  // s = u - (t - u) v leaves a single endpoint singularity at v = 0.
  const double gap = t - u;
  const auto r = quad::integrate(
      [=](double v) { return std::pow(v, -alpha) * std::pow(1.0 + v, -1.0 - alpha); },
      0.0, u / gap, 1e-12);
  row.lhs = std::pow(gap, -2.0 * alpha) * r.value;
  row.converged = r.converged;
  row.bound = boost::math::beta(1.0 - alpha, 2.0 * alpha) * std::pow(t - u, -2.0 * alpha);
  row.ratio = row.lhs / row.bound;
  return row;
}

}  // namespace

KernelReport verify_kernel_estimates(double alpha, const std::vector<double>& lambdas,
                                     std::size_t points, double horizon,
                                     const Thresholds& th) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw std::invalid_argument("kernel estimates need alpha in (0, 1/2)");
  }
  if (points < 1) throw std::invalid_argument("kernel grid needs at least one point");
  KernelReport rep;
  rep.alpha = alpha;
  bool converged = true;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    rep.weighted.push_back(weighted_row(lambda, alpha, horizon));
    rep.max_ratio = std::max(rep.max_ratio, rep.weighted.back().ratio);
    converged = converged && rep.weighted.back().converged;
  }
  // u on the interior points i / (points + 1), t on j / points; pairs with u < t.
  for (std::size_t i = 1; i <= points; ++i) {
    const double u = horizon * static_cast<double>(i) / static_cast<double>(points + 1);
    for (std::size_t j = 1; j <= points; ++j) {
      const double t = horizon * static_cast<double>(j) / static_cast<double>(points);
      if (!(t > u)) continue;
      rep.beta.push_back(beta_row(u, t, alpha));
      rep.max_ratio = std::max(rep.max_ratio, rep.beta.back().ratio);
      converged = converged && rep.beta.back().converged;
    }
  }
  rep.pass = converged && rep.max_ratio <= 1.0 + th.kernel_ratio_slack;
  return rep;
}

// ---------------------------------------------------------------------------

double self_similarity_exponent(double hurst, double alpha) {
  return (alpha + hurst - 1.0) / (1.0 - alpha);
}

SelfSimilarityReport verify_self_similarity(double hurst, double alpha,
                                            const std::vector<Interval>& intervals,
                                            std::size_t replicas, const Seed& seed,
                                            std::size_t steps, double kappa_multiplier,
                                            const Thresholds& th, unsigned threads) {
  validate_alpha(alpha, hurst);
  if (replicas < 2) throw std::invalid_argument("self-similarity needs replicas");
  SelfSimilarityReport rep;
  rep.hurst = hurst;
  rep.alpha = alpha;
  rep.kappa = self_similarity_exponent(hurst, alpha);
  rep.kappa_multiplier = kappa_multiplier;

  const GridSpec grid(1.0, steps);
  const double power = 1.0 / (1.0 - alpha);
  std::vector<std::size_t> cells;
  for (const auto& iv : intervals) {
    if (!(0.0 <= iv.a && iv.a < iv.b && iv.b <= 1.0)) {
      throw std::invalid_argument("intervals must satisfy 0 <= a < b <= 1");
    }
    cells.push_back(grid.node_index(iv.b) - grid.node_index(iv.a));
  }

  const std::size_t k = intervals.size();
  std::vector<std::vector<double>> scaled(k, std::vector<double>(replicas));
  std::vector<std::vector<double>> reference(k, std::vector<double>(replicas));
  const double exponent = kappa_multiplier * rep.kappa;

  parallel_for(
      replicas,
      [&](std::size_t r) {
        const SamplePath b =
            gen_fbm(grid, hurst, seed.replica(r).with_stream(stream::fbm));
        for (std::size_t i = 0; i < k; ++i) {
          const auto& iv = intervals[i];
          const double norm = norm_0_interval(b, iv.a, iv.b, alpha);
          scaled[i][r] = std::pow(iv.b - iv.a, -exponent) * std::pow(norm, power);

          const SamplePath ref =
              gen_fbm(GridSpec(1.0, cells[i]), hurst,
                      seed.replica(replicas * (i + 1) + r).with_stream(stream::fbm));
          reference[i][r] = std::pow(norm_0_interval(ref, 0.0, 1.0, alpha), power);
        }
      },
      threads);

  rep.pass = true;
  for (std::size_t i = 0; i < k; ++i) {
    const auto ks = stats::ks_two_sample(scaled[i], reference[i]);
    SelfSimilarityRow row;
    row.interval = intervals[i];
    row.cells = cells[i];
    row.statistic = ks.statistic;
    row.p_value = ks.p_value;
    row.pass = ks.p_value > th.ks_p_value;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------

ProductMomentReport verify_jump_product_moment(double rate, const MarkLaw& marks,
                                               const std::function<double(double)>& g,
                                               double p, double horizon,
                                               std::size_t replicas, const Seed& seed,
                                               const Thresholds& th, unsigned threads) {
  if (replicas < 2) throw std::invalid_argument("product moment needs replicas");
  const double power = 4.0 * p;
  ProductMomentReport rep;
  rep.replicas = replicas;
  const double mark_moment = marks.expectation([&](double y) { return std::pow(g(y), power); });
  rep.exact = std::exp((mark_moment - 1.0) * rate * horizon);

  std::vector<double> product(replicas);
  parallel_for(
      replicas,
      [&](std::size_t r) {
        const JumpTrain j = gen_jump_train(rate, marks, horizon,
                                           seed.replica(r).with_stream(stream::jumps));
        double acc = 1.0;
        for (double y : j.marks) acc *= std::pow(g(y), power);
        product[r] = acc;
      },
      threads);

  rep.empirical = stats::mean(product);
  rep.standard_error = stats::standard_error(product);
  const double diff = std::abs(rep.empirical - rep.exact);
  rep.z_score = rep.standard_error > 0.0 ? diff / rep.standard_error
                                         : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  rep.pass = diff <= th.product_moment_se * rep.standard_error ||
             diff <= 1e-12 * std::max(1.0, rep.exact);
  return rep;
}

}  // namespace mfsde
