#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfsde/analysis.hpp"
#include "mfsde/coefficients.hpp"
#include "mfsde/noise.hpp"

namespace mfsde::cli {

/// Configuration problem; `line` is 0 when no single line is to blame.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ModelSection {
  std::string name = "linear_c";
  double x0 = 1.0;
  ModelParams params;  ///< overrides of the model defaults
  bool operator==(const ModelSection&) const = default;
};

struct NoiseSection {
  double hurst = 0.75;
  double rate = 0.0;
  std::string marks = "uniform";  ///< gaussian | two_point | uniform
  double mark_low = -1.0;
  double mark_high = 1.0;
  double mark_p_high = 0.5;
  double mark_mean = 0.0;
  double mark_stddev = 1.0;
  double rho = 0.0;
  bool operator==(const NoiseSection&) const = default;
};

struct GridSection {
  double horizon = 1.0;
  std::size_t steps = 256;
  bool operator==(const GridSection&) const = default;
};

struct FracSection {
  std::optional<double> alpha;  ///< unset: midpoint of (1 - H, 1/2)
  double lambda = 0.0;
  double eta = 0.1;
  double beta = 0.5;
  bool operator==(const FracSection&) const = default;
};

struct McSection {
  std::size_t replicas = 1000;
  std::vector<double> p_list{1.0, 2.0, 4.0, 8.0};
  double tail_p_max = 8.0;
  std::size_t lemma_replicas = 400;
  std::size_t selfsim_replicas = 1000;
  std::size_t selfsim_steps = 512;
  std::vector<std::pair<double, double>> selfsim_intervals{{0.0, 0.25}, {0.5, 1.0}};
  std::size_t product_replicas = 100000;
  double product_p = 0.25;
  std::string product_g = "one_plus_abs";  ///< one | abs | one_plus_abs
  std::vector<double> kernel_lambdas{1.0, 10.0, 100.0, 1000.0};
  std::size_t kernel_points = 20;
  std::size_t convergence_levels = 3;
  std::size_t convergence_base_steps = 2048;
  std::size_t convergence_replicas = 100;
  std::size_t paths = 1;  ///< paths written by `simulate`
  unsigned threads = 0;
  double holdout_rate = 0.95;
  double moment_stability_se = 3.0;
  double product_moment_se = 4.0;
  double ks_p_value = 0.01;
  double kernel_ratio_slack = 1e-3;
  bool operator==(const McSection&) const = default;
};

struct RunConfig {
  ModelSection model;
  NoiseSection noise;
  GridSection grid;
  FracSection frac;
  McSection mc;
  std::uint64_t seed = 1;
  std::string output = "out";

  /// Line of each "section.key" in the parsed text (diagnostics only).
  std::map<std::string, std::size_t> lines;

  bool operator==(const RunConfig& o) const {
    return model == o.model && noise == o.noise && grid == o.grid && frac == o.frac &&
           mc == o.mc && seed == o.seed && output == o.output;
  }

  double alpha() const;
  Thresholds thresholds() const;
  MarkLaw mark_law() const;
  CoefficientSet coefficients() const;
  std::function<double(double)> product_g_function() const;
};

/// Parses the INI-like text (sections, `key = value`, `#` or `;` comments).
/// Unknown sections or keys and malformed values throw ConfigError with the
/// offending line. The result is validated.
RunConfig parse_config(std::istream& is);
RunConfig parse_config_string(const std::string& text);
RunConfig load_config(const std::string& path);

/// Every field, in a fixed order; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& c);

/// Throws ConfigError naming the violated constraint (and its line when known).
void validate(const RunConfig& c);

}  // namespace mfsde::cli
