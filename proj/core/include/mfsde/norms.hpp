#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "mfsde/grid.hpp"

namespace mfsde {

/// alpha in (1-H, 1/2), lambda >= 0, eta in (0, 1/2 - alpha).
struct NormParams {
  double alpha = 0.3;
  double lambda = 0.0;
  double eta = 0.1;
};

void validate(const NormParams& p);

/// ||f||_t = int_0^t |f(t) - f(s)| (t - s)^{-1-alpha} ds at the grid node t.
/// Returns 0 for t = 0.
double norm_t(const SamplePath& f, double t, double alpha);

/// ||f||_s at every grid node s.
std::vector<double> norm_t_profile(const SamplePath& f, double alpha);

struct WeightedNorms {
  double norm_lambda = 0.0;    ///< sup_{s<=t} e^{-lambda s} |f(s)|
  double norm_1_lambda = 0.0;  ///< sup_{s<=t} e^{-lambda s} ||f||_s
};

WeightedNorms weighted_norms(const SamplePath& f, double lambda, double t,
                             double alpha);

/// ||f||_{inf;t} = ||f||_{0,t} + ||f||_{1,0,t}.
double norm_inf(const SamplePath& f, double t, double alpha);

/// ||f||_{0;[s,t]}: supremum over grid pairs s <= u < v <= t of
///   |f(v) - f(u)| / (v - u)^{1-alpha} + int_u^v |f(u) - f(z)| (z - u)^{alpha-2} dz.
/// Throws std::invalid_argument unless s < t.
double norm_0_interval(const SamplePath& f, double s, double t, double alpha);

/// Same seminorm on a grid function covering [a, b].
double norm_0_interval(const GridFunction& f, double alpha);

/// Garsia-Rodemich-Rumsey functional
///   xi_eta(T) = ( int_0^T int_0^T |f(y) - f(x)|^{2/eta} / |x - y|^{1/eta} dx dy )^{eta/2}
/// by a double trapezoidal sum with the diagonal excluded. Requires
/// 0 < eta < 1/2 - alpha.
double grr_functional(const SamplePath& f, double eta, double horizon,
                      double alpha);

/// Lambda = max(||bh||_{0;[0,T]}, 1).
double capital_lambda(const SamplePath& bh, double horizon, double alpha);

struct NormReport {
  std::string path_id;
  double interval_start = 0.0;
  double interval_end = 0.0;
  double time = 0.0;
  NormParams params;

  double norm_t = 0.0;
  double norm_lambda = 0.0;
  double norm_1_lambda = 0.0;
  double norm_inf = 0.0;
  double norm_0_interval = 0.0;
  double xi_eta = 0.0;
};

/// Evaluates the whole family: ||.||_t, the weighted norms and ||.||_{inf;t}
/// at time t, ||.||_{0;[s,t]} and xi_eta(t).
NormReport compute_norm_report(const SamplePath& f, const NormParams& params,
                               double s, double t, std::string path_id = "0");

void write_norm_report_header(std::ostream& os);
void write_norm_report_row(std::ostream& os, const NormReport& r);

}  // namespace mfsde
