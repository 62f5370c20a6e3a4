#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "mfsde/grid.hpp"

namespace mfsde {

using TimeStateFn = std::function<double(double t, double x)>;
using JumpFn = std::function<double(double t, double x, double y)>;

/// Constants the caller asserts for the coefficient hypotheses.
struct DeclaredConstants {
  double growth = 0.0;      ///< |a|+|b|+|c| <= C(1+|x|) and |dc/dx| <= C
  double lipschitz = 0.0;   ///< x-Lipschitz constant of a, b, dc/dx (summed)
  double time_holder = 0.0; ///< time-Hölder constant of a, b, c, dc/dx (summed)
  double beta = 0.5;        ///< time-Hölder exponent
  double b_bound = std::numeric_limits<double>::infinity();  ///< |b| <= b_bound
  std::function<double(double)> jump_bound = [](double) { return 0.0; };  ///< g(y)
  std::string jump_bound_description = "g(y) = 0";
};

/// Terminal value X_T in closed form, given the terminal driver values and
/// the jump train. Empty when the model has none.
using ClosedForm = std::function<double(double x0, double horizon, double w_t,
                                        double b_t, const JumpTrain& jumps)>;

struct CoefficientSet {
  std::string name;
  TimeStateFn a = [](double, double) { return 0.0; };
  TimeStateFn b = [](double, double) { return 0.0; };
  TimeStateFn c = [](double, double) { return 0.0; };
  TimeStateFn dc_dx = [](double, double) { return 0.0; };
  JumpFn q = [](double, double, double) { return 0.0; };
  DeclaredConstants constants;
  ClosedForm closed_form;
};

struct SamplingBox {
  double t_min = 0.0;
  double t_max = 1.0;
  double x_min = -10.0;
  double x_max = 10.0;
  double y_min = -1.0;
  double y_max = 1.0;
};

struct AssumptionCheck {
  std::string name;        ///< e.g. "H1 growth"
  double max_quotient = 0.0;
  double declared = 0.0;
  bool pass = true;
  bool skipped = false;    ///< constant not declared (infinite bound)
  // Witness of the maximum: (t, x) and, where relevant, the second point.
  double t = 0.0;
  double x = 0.0;
  double t2 = 0.0;
  double x2 = 0.0;
  double y = 0.0;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool pass() const;
  const AssumptionCheck& find(const std::string& name) const;
};

/// Empirical maxima of every hypothesis quotient over `samples` random points
/// of the box. A check passes when its maximum is within declared * (1 + 1e-6).
/// Failures are report entries, never exceptions.
AssumptionReport check_assumptions(const CoefficientSet& coeffs,
                                   const SamplingBox& box, std::size_t samples,
                                   std::uint64_t seed = 1);

using ModelParams = std::map<std::string, double>;

/// Registered model names.
std::vector<std::string> model_names();

/// Parameter names (with defaults) accepted by a registered model.
ModelParams model_defaults(const std::string& name);

/// Builds a registered coefficient model. Unknown names or parameters throw
/// std::invalid_argument.
///
///   zero            a = b = c = q = 0
///   additive_fbm    c = sigma_h, optional additive jumps q = jump_scale * y
///   linear          a = mu x, b = sigma_w x, c = sigma_h x, q = jump_scale x y
///   linear_c        a = theta (m - x), b = sigma_w, c = sigma_h x
///   trigonometric   a = kappa sin x + mu sin t, b = sigma_w cos x,
///                   c = c0 + sigma_h sin x
///   logistic_drift  a = -r tanh(x / 2), b = sigma_w, c = sigma_h x
///   pure_jump       a = b = c = 0, q = jump_scale * y
///   jump_mixed      a = -theta x, b = sigma_w cos x, c = c0 + sigma_h sin x,
///                   q = jump_scale * y
///   unbounded_b     a = 0, b = sigma_w x, c = sigma_h, q = jump_scale x y
///                   (breaks the boundedness of b; control model)
///
/// `horizon` and `beta` enter the declared time-Hölder constant.
CoefficientSet make_model(const std::string& name, const ModelParams& params = {},
                          double horizon = 1.0, double beta = 0.5);

}  // namespace mfsde
