#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mfsde/coefficients.hpp"
#include "mfsde/grid.hpp"
#include "mfsde/noise.hpp"
#include "mfsde/seed.hpp"
#include "mfsde/solver.hpp"

namespace mfsde {

/// PASS thresholds of the verification suites.
struct Thresholds {
  double holdout_rate = 0.95;        ///< lemma: holdout satisfaction rate
  double moment_stability_se = 3.0;  ///< half vs full, combined standard errors
  double product_moment_se = 4.0;    ///< jump product moment vs closed form
  double ks_p_value = 0.01;          ///< self-similarity KS test
  double kernel_ratio_slack = 1e-3;  ///< kernel estimates: ratio <= 1 + slack
};

/// Runs fn(0), ..., fn(count - 1) on `threads` workers (0 = hardware
/// concurrency). Results must be written by index; the first exception
/// (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

struct EnsembleSpec {
  CoefficientSet model;
  double x0 = 1.0;
  GridSpec grid{1.0, 256};
  double hurst = 0.75;
  double rate = 0.0;
  MarkLaw marks;
  DependenceModel dependence;
  Seed seed;
  std::size_t replicas = 100;
  bool keep_paths = false;  ///< store drivers and solutions per replica
  unsigned threads = 0;
};

struct Replica {
  std::size_t index = 0;
  bool ok = true;
  std::string error;
  double sup_abs = 0.0;
  double terminal = 0.0;
  std::size_t jump_count = 0;
  std::optional<DrivingTriple> drivers;
  std::optional<SolutionPath> solution;
};

struct Ensemble {
  EnsembleSpec spec;
  std::vector<Replica> replicas;

  std::size_t excluded() const;
  /// sup |X| of the replicas that finished, in replica order.
  std::vector<double> sup_values() const;
};

/// Replica r is driven by the streams of spec.seed.replica(r).
Ensemble simulate_ensemble(const EnsembleSpec& spec);

struct MomentRow {
  double p = 0.0;
  double mean = 0.0;
  double standard_error = 0.0;
  double half_mean = 0.0;
  double half_standard_error = 0.0;
  std::size_t replicas = 0;
  bool stable = false;
};

struct MomentTable {
  std::vector<MomentRow> rows;
  std::size_t excluded = 0;
  std::size_t total = 0;
  bool power_means_monotone = true;

  bool stable() const;
};

/// Empirical E[sup |X|^p] with batch-means errors, and the half-vs-full
/// stability check. Requires at least 100 finished replicas.
MomentTable estimate_moments(const Ensemble& ens, const std::vector<double>& p_list,
                             const Thresholds& th = {});

struct TailReport {
  double slope = 0.0;  ///< +inf for a degenerate upper tail
  std::size_t order_statistics = 0;
  double p_max = 0.0;
  bool supported = false;
};

/// Least-squares slope of log survival against log sup|X| over the top
/// ceil(sqrt(M)) order statistics; supported when slope > p_max + 1.
TailReport tail_diagnostic(const std::vector<double>& sup_values, double p_max);
TailReport tail_diagnostic(const Ensemble& ens, double p_max);

struct LemmaPath {
  double lhs = 0.0;             ///< ||X||_{inf;T}
  double capital_lambda = 1.0;  ///< max(||B^H||_{0;[0,T]}, 1)
  double jb = 0.0;              ///< ||I_b||_{inf;T}
  double k_required = 0.0;      ///< smallest K for which this path satisfies the bound
};

struct LemmaReport {
  std::vector<LemmaPath> paths;
  std::size_t training = 0;
  double k_fit = 0.0;
  std::vector<double> k_envelope;  ///< running max of k_required over the training half
  double holdout_rate = 0.0;
  bool pass = false;
};

/// Smallest K with r <= K exp(K c), i.e. K = W0(r c) / c.
double minimal_k(double ratio, double c);

/// Requires a jump-free ensemble with keep_paths. The first half trains K,
/// the second half is held out.
LemmaReport verify_pathwise_lemma(const Ensemble& ens, double alpha,
                                  const Thresholds& th = {});

struct WeightedKernelRow {
  double lambda = 0.0;
  double sup_value = 0.0;
  double argmax = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool converged = true;
};

struct BetaKernelRow {
  double u = 0.0;
  double t = 0.0;
  double lhs = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool converged = true;
};

struct KernelReport {
  double alpha = 0.0;
  std::vector<WeightedKernelRow> weighted;
  std::vector<BetaKernelRow> beta;
  double max_ratio = 0.0;
  bool pass = false;
};

/// (i) sup_{s<=t} int_0^s e^{lambda(u-s)} u^{-alpha} du <= Gamma(1-alpha) lambda^{alpha-1}
/// for every lambda, with t = horizon;
/// (ii) int_0^u (u-s)^{-alpha} (t-s)^{-1-alpha} ds <= B(1-alpha, 2 alpha) (t-u)^{-2 alpha}
/// on a points x points grid of pairs u < t in (0, horizon].
KernelReport verify_kernel_estimates(double alpha, const std::vector<double>& lambdas,
                                     std::size_t points = 20, double horizon = 1.0,
                                     const Thresholds& th = {});

/// kappa = (alpha + H - 1) / (1 - alpha).
double self_similarity_exponent(double hurst, double alpha);

struct Interval {
  double a = 0.0;
  double b = 1.0;
};

struct SelfSimilarityRow {
  Interval interval;
  std::size_t cells = 0;
  double statistic = 0.0;
  double p_value = 0.0;
  bool pass = false;
};

struct SelfSimilarityReport {
  double hurst = 0.0;
  double alpha = 0.0;
  double kappa = 0.0;
  double kappa_multiplier = 1.0;
  std::vector<SelfSimilarityRow> rows;
  bool pass = false;
};

/// (b-a)^{-m kappa} ||B^H||_{0;[a,b]}^{1/(1-alpha)} from paths on [0, 1] with
/// `steps` cells, against ||B^H||_{0;[0,1]}^{1/(1-alpha)} from independent
/// paths with the same number of cells as [a, b]. m = kappa_multiplier.
SelfSimilarityReport verify_self_similarity(double hurst, double alpha,
                                            const std::vector<Interval>& intervals,
                                            std::size_t replicas, const Seed& seed,
                                            std::size_t steps = 512,
                                            double kappa_multiplier = 1.0,
                                            const Thresholds& th = {},
                                            unsigned threads = 0);

struct ProductMomentReport {
  double empirical = 0.0;
  double standard_error = 0.0;
  double exact = 0.0;
  double z_score = 0.0;
  std::size_t replicas = 0;
  bool pass = false;
};

/// E[prod_{n <= N(T)} g(dL_n)^{4p}] against exp{(E[g(Y)^{4p}] - 1) rate T}.
ProductMomentReport verify_jump_product_moment(double rate, const MarkLaw& marks,
                                               const std::function<double(double)>& g,
                                               double p, double horizon,
                                               std::size_t replicas, const Seed& seed,
                                               const Thresholds& th = {},
                                               unsigned threads = 0);

}  // namespace mfsde
