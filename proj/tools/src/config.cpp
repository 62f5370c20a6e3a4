#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "mfsde/csv.hpp"
#include "mfsde/frac_calc.hpp"
#include "mfsde/norms.hpp"

namespace mfsde::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) { return csv::parse_double(v); }

std::size_t to_size(const std::string& v) {
  std::size_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("expected a non-negative integer: " + v);
  return out;
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("expected an unsigned 64-bit integer: " + v);
  return out;
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  for (const auto& item : csv::split(v, ',')) out.push_back(to_double(trim(item)));
  return out;
}

std::string from_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += csv::format_double(v[i]);
  }
  return out;
}

std::vector<std::pair<double, double>> to_intervals(const std::string& v) {
  std::vector<std::pair<double, double>> out;
  for (const auto& item : csv::split(v, ',')) {
    const auto parts = csv::split(trim(item), ':');
    if (parts.size() != 2) throw std::invalid_argument("interval must be a:b, got " + item);
    out.emplace_back(to_double(trim(parts[0])), to_double(trim(parts[1])));
  }
  return out;
}

std::string from_intervals(const std::vector<std::pair<double, double>>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += csv::format_double(v[i].first) + ":" + csv::format_double(v[i].second);
  }
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

#define MFSDE_DOUBLE(sec, member, name)                                              \
  Field{#sec, name, [](RunConfig& c, const std::string& v) { c.sec.member = to_double(v); }, \
        [](const RunConfig& c) -> std::optional<std::string> {                          \
          return csv::format_double(c.sec.member);                                      \
        }}
#define MFSDE_SIZE(sec, member, name)                                                \
  Field{#sec, name, [](RunConfig& c, const std::string& v) { c.sec.member = to_size(v); }, \
        [](const RunConfig& c) -> std::optional<std::string> {                          \
          return std::to_string(c.sec.member);                                          \
        }}
#define MFSDE_STRING(sec, member, name)                                              \
  Field{#sec, name, [](RunConfig& c, const std::string& v) { c.sec.member = v; },     \
        [](const RunConfig& c) -> std::optional<std::string> { return c.sec.member; }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      MFSDE_STRING(model, name, "name"),
      MFSDE_DOUBLE(model, x0, "x0"),

      MFSDE_DOUBLE(noise, hurst, "hurst"),
      MFSDE_DOUBLE(noise, rate, "rate"),
      MFSDE_STRING(noise, marks, "marks"),
      MFSDE_DOUBLE(noise, mark_low, "mark_low"),
      MFSDE_DOUBLE(noise, mark_high, "mark_high"),
      MFSDE_DOUBLE(noise, mark_p_high, "mark_p_high"),
      MFSDE_DOUBLE(noise, mark_mean, "mark_mean"),
      MFSDE_DOUBLE(noise, mark_stddev, "mark_stddev"),
      MFSDE_DOUBLE(noise, rho, "rho"),

      MFSDE_DOUBLE(grid, horizon, "horizon"),
      MFSDE_SIZE(grid, steps, "steps"),

      Field{"frac", "alpha",
            [](RunConfig& c, const std::string& v) { c.frac.alpha = to_double(v); },
            [](const RunConfig& c) -> std::optional<std::string> {
              if (!c.frac.alpha) return std::nullopt;
              return csv::format_double(*c.frac.alpha);
            }},
      MFSDE_DOUBLE(frac, lambda, "lambda"),
      MFSDE_DOUBLE(frac, eta, "eta"),
      MFSDE_DOUBLE(frac, beta, "beta"),

      MFSDE_SIZE(mc, replicas, "replicas"),
      Field{"mc", "p_list",
            [](RunConfig& c, const std::string& v) { c.mc.p_list = to_list(v); },
            [](const RunConfig& c) -> std::optional<std::string> { return from_list(c.mc.p_list); }},
      MFSDE_DOUBLE(mc, tail_p_max, "tail_p_max"),
      MFSDE_SIZE(mc, lemma_replicas, "lemma_replicas"),
      MFSDE_SIZE(mc, selfsim_replicas, "selfsim_replicas"),
      MFSDE_SIZE(mc, selfsim_steps, "selfsim_steps"),
      Field{"mc", "selfsim_intervals",
            [](RunConfig& c, const std::string& v) { c.mc.selfsim_intervals = to_intervals(v); },
            [](const RunConfig& c) -> std::optional<std::string> {
              return from_intervals(c.mc.selfsim_intervals);
            }},
      MFSDE_SIZE(mc, product_replicas, "product_replicas"),
      MFSDE_DOUBLE(mc, product_p, "product_p"),
      MFSDE_STRING(mc, product_g, "product_g"),
      Field{"mc", "kernel_lambdas",
            [](RunConfig& c, const std::string& v) { c.mc.kernel_lambdas = to_list(v); },
            [](const RunConfig& c) -> std::optional<std::string> {
              return from_list(c.mc.kernel_lambdas);
            }},
      MFSDE_SIZE(mc, kernel_points, "kernel_points"),
      MFSDE_SIZE(mc, convergence_levels, "convergence_levels"),
      MFSDE_SIZE(mc, convergence_base_steps, "convergence_base_steps"),
      MFSDE_SIZE(mc, convergence_replicas, "convergence_replicas"),
      MFSDE_SIZE(mc, paths, "paths"),
      Field{"mc", "threads",
            [](RunConfig& c, const std::string& v) {
              c.mc.threads = static_cast<unsigned>(to_size(v));
            },
            [](const RunConfig& c) -> std::optional<std::string> {
              return std::to_string(c.mc.threads);
            }},
      MFSDE_DOUBLE(mc, holdout_rate, "holdout_rate"),
      MFSDE_DOUBLE(mc, moment_stability_se, "moment_stability_se"),
      MFSDE_DOUBLE(mc, product_moment_se, "product_moment_se"),
      MFSDE_DOUBLE(mc, ks_p_value, "ks_p_value"),
      MFSDE_DOUBLE(mc, kernel_ratio_slack, "kernel_ratio_slack"),

      Field{"seed", "root",
            [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); },
            [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.seed); }},
      Field{"output", "directory",
            [](RunConfig& c, const std::string& v) { c.output = v; },
            [](const RunConfig& c) -> std::optional<std::string> { return c.output; }},
  };
  return table;
}

#undef MFSDE_DOUBLE
#undef MFSDE_SIZE
#undef MFSDE_STRING

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

bool known_section(const std::string& s) {
  for (const auto& f : fields()) {
    if (f.section == s) return true;
  }
  return false;
}

std::size_t line_of(const RunConfig& c, const std::string& key) {
  const auto it = c.lines.find(key);
  return it == c.lines.end() ? 0 : it->second;
}

}  // namespace

ConfigError::ConfigError(const std::string& message, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

double RunConfig::alpha() const {
  return frac.alpha ? *frac.alpha : FracParams::default_alpha(noise.hurst);
}

Thresholds RunConfig::thresholds() const {
  Thresholds t;
  t.holdout_rate = mc.holdout_rate;
  t.moment_stability_se = mc.moment_stability_se;
  t.product_moment_se = mc.product_moment_se;
  t.ks_p_value = mc.ks_p_value;
  t.kernel_ratio_slack = mc.kernel_ratio_slack;
  return t;
}

MarkLaw RunConfig::mark_law() const {
  if (noise.marks == "gaussian") return GaussianMarks{noise.mark_mean, noise.mark_stddev};
  if (noise.marks == "two_point") {
    return TwoPointMarks{noise.mark_low, noise.mark_high, noise.mark_p_high};
  }
  if (noise.marks == "uniform") return UniformMarks{noise.mark_low, noise.mark_high};
  throw ConfigError("marks must be gaussian, two_point or uniform", line_of(*this, "noise.marks"));
}

CoefficientSet RunConfig::coefficients() const {
  return make_model(model.name, model.params, grid.horizon, frac.beta);
}

std::function<double(double)> RunConfig::product_g_function() const {
  if (mc.product_g == "one") return [](double) { return 1.0; };
  if (mc.product_g == "abs") return [](double y) { return std::abs(y); };
  if (mc.product_g == "one_plus_abs") return [](double y) { return 1.0 + std::abs(y); };
  throw ConfigError("product_g must be one, abs or one_plus_abs",
                    line_of(*this, "mc.product_g"));
}

void validate(const RunConfig& c) {
  auto check = [&](bool ok, const std::string& msg, const std::string& key) {
    if (!ok) throw ConfigError(msg, line_of(c, key));
  };
  check(c.noise.hurst > 0.5 && c.noise.hurst < 1.0, "H must lie in (1/2, 1)", "noise.hurst");
  const double alpha = c.alpha();
  check(alpha > 1.0 - c.noise.hurst && alpha < 0.5, "alpha must lie in (1-H, 1/2)",
        "frac.alpha");
  check(c.frac.beta > 1.0 - c.noise.hurst && c.frac.beta < 1.0, "beta must lie in (1-H, 1)",
        "frac.beta");
  check(c.frac.lambda >= 0.0, "lambda must be >= 0", "frac.lambda");
  check(c.frac.eta > 0.0 && c.frac.eta < 0.5 - alpha, "eta must lie in (0, 1/2 - alpha)",
        "frac.eta");
  check(c.grid.horizon > 0.0 && std::isfinite(c.grid.horizon),
        "grid horizon T must be positive and finite", "grid.horizon");
  check(c.grid.steps >= 1, "grid must have at least one step", "grid.steps");
  check(c.noise.rate >= 0.0 && std::isfinite(c.noise.rate),
        "jump rate must be finite and >= 0", "noise.rate");
  check(std::abs(c.noise.rho) <= 1.0, "rho must lie in [-1, 1]", "noise.rho");
  check(std::isfinite(c.model.x0), "x0 must be finite", "model.x0");
  (void)c.mark_law();
  if (c.noise.marks == "uniform" || c.noise.marks == "two_point") {
    check(c.noise.mark_low <= c.noise.mark_high, "mark_low must not exceed mark_high",
          "noise.mark_low");
  }
  if (c.noise.marks == "two_point") {
    check(c.noise.mark_p_high >= 0.0 && c.noise.mark_p_high <= 1.0,
          "mark_p_high must lie in [0, 1]", "noise.mark_p_high");
  }
  if (c.noise.marks == "gaussian") {
    check(c.noise.mark_stddev > 0.0, "mark_stddev must be positive", "noise.mark_stddev");
  }
  (void)c.product_g_function();
  try {
    (void)c.coefficients();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), line_of(c, "model.name"));
  }
  for (double p : c.mc.p_list) check(p > 0.0, "moment orders must be positive", "mc.p_list");
  check(!c.mc.p_list.empty(), "p_list must not be empty", "mc.p_list");
  for (double l : c.mc.kernel_lambdas) {
    check(l > 0.0, "kernel lambdas must be positive", "mc.kernel_lambdas");
  }
  for (const auto& [a, b] : c.mc.selfsim_intervals) {
    check(0.0 <= a && a < b && b <= 1.0, "self-similarity intervals need 0 <= a < b <= 1",
          "mc.selfsim_intervals");
  }
  check(c.mc.convergence_levels >= 3, "convergence needs at least 3 refinements",
        "mc.convergence_levels");
  check(c.mc.convergence_base_steps >= 1, "convergence_base_steps must be >= 1",
        "mc.convergence_base_steps");
  check(c.mc.holdout_rate > 0.0 && c.mc.holdout_rate <= 1.0, "holdout_rate must lie in (0, 1]",
        "mc.holdout_rate");
  check(c.mc.ks_p_value > 0.0 && c.mc.ks_p_value < 1.0, "ks_p_value must lie in (0, 1)",
        "mc.ks_p_value");
  check(!c.output.empty(), "output directory must not be empty", "output.directory");
}

RunConfig parse_config(std::istream& is) {
  RunConfig c;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section)) throw ConfigError("unknown section [" + section + "]", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line_no);
    if (section.empty()) throw ConfigError("key outside of any section", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section + "." + key;
    if (c.lines.count(full)) throw ConfigError("duplicate key " + full, line_no);
    c.lines[full] = line_no;
    try {
      if (const Field* f = find_field(section, key)) {
        f->set(c, value);
      } else if (section == "model") {
        c.model.params[key] = to_double(value);
      } else {
        throw ConfigError("unknown key " + key + " in [" + section + "]", line_no);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("bad value for " + full + ": " + e.what(), line_no);
    }
  }
  // Model parameters are checked against the registry of the chosen model.
  ModelParams defaults;
  try {
    defaults = model_defaults(c.model.name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), line_of(c, "model.name"));
  }
  for (const auto& [key, _] : c.model.params) {
    if (!defaults.count(key)) {
      throw ConfigError("unknown key " + key + " in [model] (model " + c.model.name + ")",
                        line_of(c, "model." + key));
    }
  }
  validate(c);
  return c;
}

RunConfig parse_config_string(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  return parse_config(is);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  std::string section;
  for (const auto& f : fields()) {
    const auto value = f.get(c);
    if (!value) continue;
    if (f.section != section) {
      if (!section.empty()) os << '\n';
      section = f.section;
      os << '[' << section << "]\n";
    }
    os << f.key << " = " << *value << '\n';
    if (f.section == "model" && f.key == "x0") {
      for (const auto& [k, v] : c.model.params) os << k << " = " << csv::format_double(v) << '\n';
    }
  }
  return os.str();
}

}  // namespace mfsde::cli
