#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "mfsde/coefficients.hpp"
#include "mfsde/grid.hpp"

namespace mfsde {

/// Mixed equation on one segment, started at absolute time `offset` from
/// `initial`: times are relative to the offset and start at 0; v (Wiener)
/// and z (Hölder driver) are sampled at those times and start at 0.
struct SegmentProblem {
  double offset = 0.0;
  double initial = 0.0;
  std::vector<double> times;
  std::vector<double> v;
  std::vector<double> z;
};

void validate(const SegmentProblem& p);

/// Raised when the state leaves |x| <= blowup_threshold or becomes non-finite.
class SolverError : public std::runtime_error {
 public:
  SolverError(std::size_t step, double time, double state);
  std::size_t step() const { return step_; }
  double time() const { return time_; }
  double state() const { return state_; }

 private:
  std::size_t step_;
  double time_;
  double state_;
};

inline constexpr double blowup_threshold = 1e12;

/// Euler scheme with forward increments
///   X_{i+1} = X_i + a(u + t_i, X_i) dt_i + b(u + t_i, X_i) dV_i + c(u + t_i, X_i) dZ_i.
/// Returns X at every entry of p.times.
std::vector<double> solve_segment(const SegmentProblem& p, const CoefficientSet& coeffs);

/// Segment problem on a whole uniform grid: V and Z are shifted to start at 0.
SamplePath solve_segment(const CoefficientSet& coeffs, double initial,
                         const SamplePath& v, const SamplePath& z,
                         double offset = 0.0);

struct JumpRecord {
  double time = 0.0;
  double mark = 0.0;
  double left_limit = 0.0;
  double value = 0.0;
};

struct SegmentDiagnostics {
  double start = 0.0;
  double end = 0.0;
  std::size_t points = 0;
  double holder_exponent = 0.0;
  /// max |X(t_j) - X(t_i)| / (t_j - t_i)^exponent over dyadic lags; 0 on
  /// segments with fewer than two grid points.
  double holder_constant = 0.0;
};

struct SolutionPath {
  SamplePath path;               ///< cadlag, right-continuous values at the nodes
  JumpTrain jumps;
  std::vector<JumpRecord> records;
  std::vector<SegmentDiagnostics> segments;

  double terminal() const { return path.values.back(); }
  /// sup over nodes and left limits of |X|.
  double sup_abs() const;
};

/// Jump-restart construction: between consecutive jump times the mixed
/// equation is solved with drivers shifted to the previous jump time
/// (linearly interpolated at off-grid jump times); at each jump
/// X_tau = X_{tau-} + q(tau, X_{tau-}, mark).
/// `holder_exponent` is the order used for the per-segment diagnostics.
SolutionPath solve_with_jumps(const CoefficientSet& coeffs, double x0,
                              const SamplePath& w, const SamplePath& bh,
                              const JumpTrain& jumps, double holder_exponent = 0.45);

/// Coefficient values f(t_i, X_i) on the grid of X.
GridFunction coefficient_values(const TimeStateFn& f, const SamplePath& x);

/// Running Itô sums I(t_k) = sum_{i<k} b_i (W_{i+1} - W_i).
SamplePath ito_integral_path(const GridFunction& b_values, const SamplePath& w);

/// K * exp(K * Lambda^{1/(1-alpha)}) * (1 + Jb).
double pathwise_bound_rhs(double capital_lambda, double jb, double alpha, double k);

/// CSV with header t,value,left_limit_flag. At every jump a row with the
/// left limit (flag 1) precedes the post-jump row (flag 0).
void write_solution_csv(std::ostream& os, const SolutionPath& s);

}  // namespace mfsde
