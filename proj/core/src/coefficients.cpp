#include "mfsde/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mfsde/seed.hpp"

namespace mfsde {
namespace {

constexpr double kRelativeSlack = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tracker {
  AssumptionCheck check;

  Tracker(std::string name, double declared) {
    check.name = std::move(name);
    check.declared = declared;
    check.skipped = !std::isfinite(declared);
  }

  void offer(double quotient, double t, double x, double t2 = 0.0, double x2 = 0.0,
             double y = 0.0) {
    if (std::isnan(quotient)) quotient = kInf;
    if (quotient > check.max_quotient) {
      check.max_quotient = quotient;
      check.t = t;
      check.x = x;
      check.t2 = t2;
      check.x2 = x2;
      check.y = y;
    }
  }

  AssumptionCheck finish() {
    check.pass = check.skipped ||
                 check.max_quotient <= check.declared * (1.0 + kRelativeSlack);
    return check;
  }
};

double param(const ModelParams& p, const char* key) { return p.at(key); }

const std::map<std::string, ModelParams>& registry() {
  static const std::map<std::string, ModelParams> models = {
      {"zero", {}},
      {"additive_fbm", {{"sigma_h", 1.0}, {"jump_scale", 0.0}}},
      {"linear",
       {{"mu", 0.0}, {"sigma_w", 0.5}, {"sigma_h", 0.5}, {"jump_scale", 0.0}}},
      {"linear_c",
       {{"theta", 0.5}, {"m", 1.0}, {"sigma_w", 0.5}, {"sigma_h", 0.5}}},
      {"trigonometric",
       {{"kappa", 1.0}, {"mu", 0.5}, {"sigma_w", 0.5}, {"c0", 1.0}, {"sigma_h", 0.5}}},
      {"logistic_drift", {{"r", 1.0}, {"sigma_w", 0.5}, {"sigma_h", 0.5}}},
      {"pure_jump", {{"jump_scale", 1.0}}},
      {"jump_mixed",
       {{"theta", 1.0}, {"sigma_w", 0.5}, {"c0", 0.5}, {"sigma_h", 0.25},
        {"jump_scale", 1.0}}},
      {"unbounded_b", {{"sigma_w", 1.0}, {"sigma_h", 0.5}, {"jump_scale", 0.0}}},
  };
  return models;
}

std::function<double(double)> abs_scaled(double s) {
  return [s](double y) { return std::abs(s) * std::abs(y); };
}

std::string abs_scaled_text(double s) {
  return "g(y) = " + std::to_string(std::abs(s)) + " |y|";
}

double mark_sum(const JumpTrain& jumps) {
  double s = 0.0;
  for (double y : jumps.marks) s += y;
  return s;
}

}  // namespace

bool AssumptionReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AssumptionCheck& c) { return c.pass; });
}

const AssumptionCheck& AssumptionReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no assumption check named " + name);
}

AssumptionReport check_assumptions(const CoefficientSet& coeffs,
                                   const SamplingBox& box, std::size_t samples,
                                   std::uint64_t seed) {
  const auto& k = coeffs.constants;
  Tracker growth("H1 growth", k.growth);
  Tracker derivative("H1 dc_dx", k.growth);
  Tracker lipschitz("H2 lipschitz", k.lipschitz);
  Tracker holder("H3 time", k.time_holder);
  Tracker bounded("H4 b bound", k.b_bound);
  Tracker jump("H6 jump", 1.0);
  Tracker consistency("dc_dx consistency", 1e-5);

  Engine rng(mix64(seed));
  std::uniform_real_distribution<double> ut(box.t_min, box.t_max);
  std::uniform_real_distribution<double> ux(box.x_min, box.x_max);
  std::uniform_real_distribution<double> uy(box.y_min, box.y_max);

  const auto& a = coeffs.a;
  const auto& b = coeffs.b;
  const auto& c = coeffs.c;
  const auto& dc = coeffs.dc_dx;

  for (std::size_t i = 0; i < samples; ++i) {
    const double t = ut(rng);
    const double s = ut(rng);
    double x = ux(rng);
    const double x2 = ux(rng);
    const double y = uy(rng);
    // The box corners carry the extreme values of most quotients.
    if (i < 2) x = i == 0 ? box.x_min : box.x_max;

    const double at = a(t, x), bt = b(t, x), ct = c(t, x), dt = dc(t, x);
    growth.offer((std::abs(at) + std::abs(bt) + std::abs(ct)) / (1.0 + std::abs(x)),
                 t, x);
    derivative.offer(std::abs(dt), t, x);
    bounded.offer(std::abs(bt), t, x);

    if (x != x2) {
      const double q = (std::abs(at - a(t, x2)) + std::abs(bt - b(t, x2)) +
                        std::abs(dt - dc(t, x2))) /
                       std::abs(x - x2);
      lipschitz.offer(q, t, x, t, x2);
    }
    if (s != t) {
      const double q = (std::abs(at - a(s, x)) + std::abs(bt - b(s, x)) +
                        std::abs(ct - c(s, x)) + std::abs(dt - dc(s, x))) /
                       std::pow(std::abs(s - t), k.beta);
      holder.offer(q, t, x, s, x);
    }

    const double qv = std::abs(coeffs.q(t, x, y));
    const double g = k.jump_bound(y);
    if (qv > 0.0) jump.offer(g > 0.0 ? qv / (g * (1.0 + std::abs(x))) : kInf, t, x, 0.0,
                             0.0, y);

    const double hx = 1e-5 * (1.0 + std::abs(x));
    const double fd = (c(t, x + hx) - c(t, x - hx)) / (2.0 * hx);
    consistency.offer(std::abs(dt - fd) / (1.0 + std::abs(dt)), t, x);
  }

  AssumptionReport report;
  for (Tracker* tr : {&growth, &derivative, &lipschitz, &holder, &bounded, &jump,
                      &consistency}) {
    report.checks.push_back(tr->finish());
  }
  return report;
}

std::vector<std::string> model_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

ModelParams model_defaults(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown model: " + name);
  return it->second;
}

CoefficientSet make_model(const std::string& name, const ModelParams& params,
                          double horizon, double beta) {
  ModelParams p = model_defaults(name);
  for (const auto& [key, value] : params) {
    if (!p.count(key)) {
      throw std::invalid_argument("model " + name + " has no parameter " + key);
    }
    if (!std::isfinite(value)) {
      throw std::invalid_argument("model parameter " + key + " must be finite");
    }
    p[key] = value;
  }

  CoefficientSet m;
  m.name = name;
  m.constants.beta = beta;
  auto& k = m.constants;

  if (name == "zero") {
    k.b_bound = 0.0;
    m.closed_form = [](double x0, double, double, double, const JumpTrain&) {
      return x0;
    };
  } else if (name == "additive_fbm") {
    const double sh = param(p, "sigma_h"), js = param(p, "jump_scale");
    m.c = [sh](double, double) { return sh; };
    m.q = [js](double, double, double y) { return js * y; };
    k.growth = std::abs(sh);
    k.b_bound = 0.0;
    k.jump_bound = abs_scaled(js);
    k.jump_bound_description = abs_scaled_text(js);
    m.closed_form = [sh, js](double x0, double, double, double bt,
                             const JumpTrain& j) {
      return x0 + sh * bt + js * mark_sum(j);
    };
  } else if (name == "linear") {
    const double mu = param(p, "mu"), sw = param(p, "sigma_w"),
                 sh = param(p, "sigma_h"), js = param(p, "jump_scale");
    m.a = [mu](double, double x) { return mu * x; };
    m.b = [sw](double, double x) { return sw * x; };
    m.c = [sh](double, double x) { return sh * x; };
    m.dc_dx = [sh](double, double) { return sh; };
    m.q = [js](double, double x, double y) { return js * x * y; };
    k.growth = std::abs(mu) + std::abs(sw) + std::abs(sh);
    k.lipschitz = std::abs(mu) + std::abs(sw);
    k.b_bound = sw == 0.0 ? 0.0 : kInf;
    k.jump_bound = abs_scaled(js);
    k.jump_bound_description = abs_scaled_text(js);
    m.closed_form = [mu, sw, sh, js](double x0, double horizon_t, double wt,
                                     double bt, const JumpTrain& j) {
      double x = x0 * std::exp(mu * horizon_t + sw * wt -
                               0.5 * sw * sw * horizon_t + sh * bt);
      for (double y : j.marks) x *= 1.0 + js * y;
      return x;
    };
  } else if (name == "linear_c") {
    const double th = param(p, "theta"), mean = param(p, "m"),
                 sw = param(p, "sigma_w"), sh = param(p, "sigma_h");
    m.a = [th, mean](double, double x) { return th * (mean - x); };
    m.b = [sw](double, double) { return sw; };
    m.c = [sh](double, double x) { return sh * x; };
    m.dc_dx = [sh](double, double) { return sh; };
    k.growth = std::max(std::abs(th * mean) + std::abs(sw), std::abs(th) + std::abs(sh));
    k.lipschitz = std::abs(th);
    k.b_bound = std::abs(sw);
  } else if (name == "trigonometric") {
    const double ka = param(p, "kappa"), mu = param(p, "mu"),
                 sw = param(p, "sigma_w"), c0 = param(p, "c0"),
                 sh = param(p, "sigma_h");
    m.a = [ka, mu](double t, double x) { return ka * std::sin(x) + mu * std::sin(t); };
    m.b = [sw](double, double x) { return sw * std::cos(x); };
    m.c = [c0, sh](double, double x) { return c0 + sh * std::sin(x); };
    m.dc_dx = [sh](double, double x) { return sh * std::cos(x); };
    k.growth = std::abs(ka) + std::abs(mu) + std::abs(sw) + std::abs(c0) + std::abs(sh);
    k.lipschitz = std::abs(ka) + std::abs(sw) + std::abs(sh);
    // |sin s - sin t| <= |s - t| <= |s - t|^beta * T^(1 - beta) on [0, T].
    k.time_holder = std::abs(mu) * std::max(1.0, std::pow(horizon, 1.0 - beta));
    k.b_bound = std::abs(sw);
  } else if (name == "logistic_drift") {
    const double r = param(p, "r"), sw = param(p, "sigma_w"), sh = param(p, "sigma_h");
    m.a = [r](double, double x) { return -r * std::tanh(0.5 * x); };
    m.b = [sw](double, double) { return sw; };
    m.c = [sh](double, double x) { return sh * x; };
    m.dc_dx = [sh](double, double) { return sh; };
    k.growth = std::max(std::abs(r) + std::abs(sw), std::abs(sh));
    k.lipschitz = 0.5 * std::abs(r);
    k.b_bound = std::abs(sw);
  } else if (name == "pure_jump") {
    const double js = param(p, "jump_scale");
    m.q = [js](double, double, double y) { return js * y; };
    k.b_bound = 0.0;
    k.jump_bound = abs_scaled(js);
    k.jump_bound_description = abs_scaled_text(js);
    m.closed_form = [js](double x0, double, double, double, const JumpTrain& j) {
      return x0 + js * mark_sum(j);
    };
  } else if (name == "jump_mixed") {
    const double th = param(p, "theta"), sw = param(p, "sigma_w"),
                 c0 = param(p, "c0"), sh = param(p, "sigma_h"),
                 js = param(p, "jump_scale");
    m.a = [th](double, double x) { return -th * x; };
    m.b = [sw](double, double x) { return sw * std::cos(x); };
    m.c = [c0, sh](double, double x) { return c0 + sh * std::sin(x); };
    m.dc_dx = [sh](double, double x) { return sh * std::cos(x); };
    m.q = [js](double, double, double y) { return js * y; };
    k.growth = std::max(std::abs(th), std::abs(sw) + std::abs(c0) + std::abs(sh));
    k.lipschitz = std::abs(th) + std::abs(sw) + std::abs(sh);
    k.b_bound = std::abs(sw);
    k.jump_bound = abs_scaled(js);
    k.jump_bound_description = abs_scaled_text(js);
  } else if (name == "unbounded_b") {
    const double sw = param(p, "sigma_w"), sh = param(p, "sigma_h"),
                 js = param(p, "jump_scale");
    m.b = [sw](double, double x) { return sw * x; };
    m.c = [sh](double, double) { return sh; };
    m.q = [js](double, double x, double y) { return js * x * y; };
    k.growth = std::max(std::abs(sw), std::abs(sh));
    k.lipschitz = std::abs(sw);
    k.jump_bound = abs_scaled(js);
    k.jump_bound_description = abs_scaled_text(js);
  }
  return m;
}

}  // namespace mfsde
