#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "manifest.hpp"
#include "mfsde/analysis.hpp"
#include "mfsde/csv.hpp"
#include "mfsde/norms.hpp"
#include "mfsde/solver.hpp"

namespace mfsde::cli {
namespace fs = std::filesystem;
using csv::format_double;

namespace {

class Summary {
 public:
  void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, double value) { add(key, format_double(value)); }
  void add_count(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }
  void verdict(const std::string& key, bool pass) { add(key, pass ? "PASS" : "FAIL"); }

  void write(const fs::path& file) const {
    std::ofstream os(file, std::ios::binary);
    for (const auto& [k, v] : rows_) os << k << ": " << v << '\n';
  }
  void print(std::ostream& os) const {
    for (const auto& [k, v] : rows_) os << k << ": " << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  std::ofstream os(dir / name, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
  return os;
}

void finish(const fs::path& dir, const RunConfig& c, const std::string& command,
            const std::string& argument, bool double_kappa, int status) {
  Manifest m;
  m.command = command;
  m.argument = argument;
  m.double_kappa = double_kappa;
  m.status = status;
  m.config_text = serialize_config(c);
  m.artifacts = hash_directory(dir.string());
  write_manifest(dir.string(), m);
}

EnsembleSpec ensemble_spec(const RunConfig& c, std::size_t replicas, bool with_jumps) {
  EnsembleSpec s;
  s.model = c.coefficients();
  s.x0 = c.model.x0;
  s.grid = GridSpec(c.grid.horizon, c.grid.steps);
  s.hurst = c.noise.hurst;
  s.rate = with_jumps ? c.noise.rate : 0.0;
  s.marks = c.mark_law();
  s.dependence.rho = c.noise.rho;
  s.seed = Seed{c.seed, 0};
  s.replicas = replicas;
  s.threads = c.mc.threads;
  return s;
}

// ---------------------------------------------------------------------------

bool suite_kernel(const RunConfig& c, const fs::path& dir, Summary& sum) {
  const auto rep = verify_kernel_estimates(c.alpha(), c.mc.kernel_lambdas, c.mc.kernel_points,
                                           1.0, c.thresholds());
  auto w = open_out(dir, "kernel_weighted.csv");
  w << "lambda,sup_value,argmax,bound,ratio,converged\n";
  for (const auto& r : rep.weighted) {
    w << format_double(r.lambda) << ',' << format_double(r.sup_value) << ','
      << format_double(r.argmax) << ',' << format_double(r.bound) << ','
      << format_double(r.ratio) << ',' << (r.converged ? 1 : 0) << '\n';
  }
  auto b = open_out(dir, "kernel_beta.csv");
  b << "u,t,lhs,bound,ratio,converged\n";
  for (const auto& r : rep.beta) {
    b << format_double(r.u) << ',' << format_double(r.t) << ',' << format_double(r.lhs) << ','
      << format_double(r.bound) << ',' << format_double(r.ratio) << ','
      << (r.converged ? 1 : 0) << '\n';
  }
  sum.add("kernel.alpha", rep.alpha);
  sum.add_count("kernel.weighted_points", rep.weighted.size());
  sum.add_count("kernel.beta_points", rep.beta.size());
  sum.add("kernel.max_ratio", rep.max_ratio);
  sum.verdict("kernel", rep.pass);
  return rep.pass;
}

bool suite_lemma(const RunConfig& c, const fs::path& dir, Summary& sum) {
  EnsembleSpec spec = ensemble_spec(c, c.mc.lemma_replicas, false);
  spec.keep_paths = true;
  const Ensemble ens = simulate_ensemble(spec);
  const auto rep = verify_pathwise_lemma(ens, c.alpha(), c.thresholds());
  auto os = open_out(dir, "lemma_paths.csv");
  os << "replica,set,norm_inf_x,capital_lambda,jb,k_required\n";
  for (std::size_t r = 0; r < rep.paths.size(); ++r) {
    const auto& p = rep.paths[r];
    os << r << ',' << (r < rep.training ? "train" : "holdout") << ','
       << format_double(p.lhs) << ',' << format_double(p.capital_lambda) << ','
       << format_double(p.jb) << ',' << format_double(p.k_required) << '\n';
  }
  auto env = open_out(dir, "lemma_k_envelope.csv");
  env << "training_paths,k_fit\n";
  for (std::size_t i = 0; i < rep.k_envelope.size(); ++i) {
    env << i + 1 << ',' << format_double(rep.k_envelope[i]) << '\n';
  }
  sum.add("lemma.model", c.model.name);
  sum.add_count("lemma.paths", rep.paths.size());
  sum.add_count("lemma.excluded", ens.excluded());
  sum.add("lemma.k_fit", rep.k_fit);
  sum.add("lemma.holdout_rate", rep.holdout_rate);
  sum.add("lemma.threshold", c.mc.holdout_rate);
  sum.verdict("lemma", rep.pass);
  return rep.pass;
}

bool suite_selfsim(const RunConfig& c, const fs::path& dir, Summary& sum, bool double_kappa) {
  std::vector<Interval> intervals;
  for (const auto& [a, b] : c.mc.selfsim_intervals) intervals.push_back({a, b});
  const auto rep = verify_self_similarity(c.noise.hurst, c.alpha(), intervals,
                                          c.mc.selfsim_replicas, Seed{c.seed, 0},
                                          c.mc.selfsim_steps, double_kappa ? 2.0 : 1.0,
                                          c.thresholds(), c.mc.threads);
  auto os = open_out(dir, "selfsim.csv");
  os << "a,b,cells,ks_statistic,p_value,pass\n";
  for (const auto& r : rep.rows) {
    os << format_double(r.interval.a) << ',' << format_double(r.interval.b) << ',' << r.cells
       << ',' << format_double(r.statistic) << ',' << format_double(r.p_value) << ','
       << (r.pass ? 1 : 0) << '\n';
  }
  sum.add("selfsim.kappa", rep.kappa);
  sum.add("selfsim.kappa_multiplier", rep.kappa_multiplier);
  sum.add("selfsim.kappa_above_one", rep.kappa > 1.0 ? "yes" : "no");
  for (const auto& r : rep.rows) {
    sum.add("selfsim.p_value[" + format_double(r.interval.a) + "," +
                format_double(r.interval.b) + "]",
            r.p_value);
  }
  sum.verdict("selfsim", rep.pass);
  return rep.pass;
}

bool suite_moments(const RunConfig& c, const fs::path& dir, Summary& sum) {
  const Ensemble ens = simulate_ensemble(ensemble_spec(c, c.mc.replicas, true));
  const auto table = estimate_moments(ens, c.mc.p_list, c.thresholds());
  const auto tail = tail_diagnostic(ens, c.mc.tail_p_max);
  auto os = open_out(dir, "moments.csv");
  os << "p,mean,standard_error,half_mean,half_standard_error,replicas,stable\n";
  for (const auto& r : table.rows) {
    os << format_double(r.p) << ',' << format_double(r.mean) << ','
       << format_double(r.standard_error) << ',' << format_double(r.half_mean) << ','
       << format_double(r.half_standard_error) << ',' << r.replicas << ','
       << (r.stable ? 1 : 0) << '\n';
  }
  const bool pass = table.stable() && tail.supported && table.excluded == 0;
  sum.add("moments.model", c.model.name);
  sum.add_count("moments.replicas", table.total);
  sum.add_count("moments.excluded", table.excluded);
  if (table.excluded > 0) sum.add("moments.WARNING", "non-finite paths were excluded");
  sum.add("moments.power_means_monotone", table.power_means_monotone ? "yes" : "no");
  sum.add("moments.stable", table.stable() ? "yes" : "no");
  sum.add("moments.tail_slope", tail.slope);
  sum.add_count("moments.tail_order_statistics", tail.order_statistics);
  sum.add("moments.tail_supported", tail.supported ? "yes" : "no");
  sum.verdict("moments", pass);
  return pass;
}

bool suite_jumps(const RunConfig& c, const fs::path& dir, Summary& sum) {
  const auto rep = verify_jump_product_moment(
      c.noise.rate, c.mark_law(), c.product_g_function(), c.mc.product_p, c.grid.horizon,
      c.mc.product_replicas, Seed{c.seed, 0}, c.thresholds(), c.mc.threads);
  auto os = open_out(dir, "jump_product.csv");
  os << "empirical,standard_error,exact,z_score,replicas,pass\n";
  os << format_double(rep.empirical) << ',' << format_double(rep.standard_error) << ','
     << format_double(rep.exact) << ',' << format_double(rep.z_score) << ',' << rep.replicas
     << ',' << (rep.pass ? 1 : 0) << '\n';
  sum.add("jumps.g", c.mc.product_g);
  sum.add("jumps.empirical", rep.empirical);
  sum.add("jumps.exact", rep.exact);
  sum.add("jumps.z_score", rep.z_score);
  sum.verdict("jumps", rep.pass);
  return rep.pass;
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& c, const std::string& out) {
  const fs::path dir(out);
  fs::create_directories(dir);
  const CoefficientSet model = c.coefficients();
  const GridSpec grid(c.grid.horizon, c.grid.steps);
  Summary sum;
  sum.add("command", "simulate");
  sum.add("model", c.model.name);

  SamplingBox box;
  box.t_max = c.grid.horizon;
  const auto assumptions = check_assumptions(model, box, 10000, c.seed);
  {
    auto os = open_out(dir, "assumptions.csv");
    os << "check,max_quotient,declared,pass,skipped,t,x,t2,x2,y\n";
    for (const auto& a : assumptions.checks) {
      os << a.name << ',' << format_double(a.max_quotient) << ',' << format_double(a.declared)
         << ',' << (a.pass ? 1 : 0) << ',' << (a.skipped ? 1 : 0) << ',' << format_double(a.t)
         << ',' << format_double(a.x) << ',' << format_double(a.t2) << ','
         << format_double(a.x2) << ',' << format_double(a.y) << '\n';
    }
  }
  sum.add("assumptions", assumptions.pass() ? "PASS" : "FAIL");
  sum.add("jump_bound", model.constants.jump_bound_description);

  NormParams np{c.alpha(), c.frac.lambda, c.frac.eta};
  auto norms = open_out(dir, "norms.csv");
  write_norm_report_header(norms);
  int status = exit_pass;
  for (std::size_t p = 0; p < c.mc.paths; ++p) {
    const std::string id = std::to_string(p);
    const auto d = gen_driving_triple(grid, c.noise.hurst, c.noise.rate, c.mark_law(),
                                      Seed{c.seed, 0}.replica(p), DependenceModel{c.noise.rho});
    csv::write_path((dir / ("wiener_" + id + ".csv")).string(), d.wiener);
    csv::write_path((dir / ("fbm_" + id + ".csv")).string(), d.fbm);
    csv::write_jumps((dir / ("jumps_" + id + ".csv")).string(), d.jumps);
    try {
      const auto s = solve_with_jumps(model, c.model.x0, d.wiener, d.fbm, d.jumps);
      auto os = open_out(dir, "solution_" + id + ".csv");
      write_solution_csv(os, s);
      write_norm_report_row(norms, compute_norm_report(s.path, np, 0.0, c.grid.horizon, id));
      sum.add("path_" + id + ".jumps", std::to_string(d.jumps.count()));
      sum.add("path_" + id + ".terminal", s.terminal());
    } catch (const SolverError& e) {
      sum.add("path_" + id + ".error", e.what());
      status = exit_fail;
    }
  }
  norms.close();
  sum.write(dir / "summary.txt");
  finish(dir, c, "simulate", "", false, status);
  return status;
}

int cmd_verify(const RunConfig& c, const std::string& suite, const std::string& out,
               bool double_kappa) {
  const std::vector<std::string> all(std::begin(suite_names), std::end(suite_names));
  std::vector<std::string> run;
  if (suite == "all") {
    run = all;
  } else if (std::find(all.begin(), all.end(), suite) != all.end()) {
    run = {suite};
  } else {
    throw ConfigError("unknown suite " + suite + " (kernel|lemma|selfsim|moments|jumps|all)");
  }

  const fs::path dir(out);
  fs::create_directories(dir);
  Summary sum;
  sum.add("command", "verify " + suite);
  bool pass = true;
  for (const auto& s : run) {
    bool ok = false;
    if (s == "kernel") ok = suite_kernel(c, dir, sum);
    if (s == "lemma") ok = suite_lemma(c, dir, sum);
    if (s == "selfsim") ok = suite_selfsim(c, dir, sum, double_kappa);
    if (s == "moments") ok = suite_moments(c, dir, sum);
    if (s == "jumps") ok = suite_jumps(c, dir, sum);
    pass = pass && ok;
  }
  sum.verdict("overall", pass);
  sum.write(dir / "summary.txt");
  sum.print(std::cout);
  const int status = pass ? exit_pass : exit_fail;
  finish(dir, c, "verify", suite, double_kappa, status);
  return status;
}

int cmd_convergence(const RunConfig& c, const std::string& out) {
  const CoefficientSet model = c.coefficients();
  if (!model.closed_form) {
    throw ConfigError("model " + c.model.name + " has no closed form for convergence",
                      c.lines.count("model.name") ? c.lines.at("model.name") : 0);
  }
  const std::size_t levels = c.mc.convergence_levels;
  const std::size_t base = c.mc.convergence_base_steps;
  const std::size_t fine_steps = base << levels;
  const GridSpec fine(c.grid.horizon, fine_steps);
  const std::size_t m = c.mc.convergence_replicas;

  // errors[r][k] for level k = 0..levels (steps = base * 2^k).
  std::vector<std::vector<double>> errors(m, std::vector<double>(levels + 1, 0.0));
  std::vector<char> failed(m, 0);
  parallel_for(
      m,
      [&](std::size_t r) {
        const auto d = gen_driving_triple(fine, c.noise.hurst, c.noise.rate, c.mark_law(),
                                          Seed{c.seed, 0}.replica(r),
                                          DependenceModel{c.noise.rho});
        const double exact = model.closed_form(c.model.x0, c.grid.horizon, d.wiener.values.back(),
                                               d.fbm.values.back(), d.jumps);
        const double scale = std::abs(exact) > 0.0 ? std::abs(exact) : 1.0;
        for (std::size_t k = 0; k <= levels; ++k) {
          const std::size_t factor = std::size_t{1} << (levels - k);
          try {
            const auto s = solve_with_jumps(model, c.model.x0, d.wiener.coarsened(factor),
                                            d.fbm.coarsened(factor), d.jumps);
            errors[r][k] = std::abs(s.terminal() - exact) / scale;
          } catch (const SolverError&) {
            failed[r] = 1;
            errors[r][k] = std::numeric_limits<double>::infinity();
          }
        }
      },
      c.mc.threads);

  constexpr double exact_floor = 1e-12;
  auto decreasing = [&](double prev, double next) {
    return next < prev || (next <= exact_floor && prev <= exact_floor);
  };

  std::vector<double> mean(levels + 1, 0.0);
  std::size_t monotone_paths = 0;
  for (std::size_t r = 0; r < m; ++r) {
    bool mono = true;
    for (std::size_t k = 0; k <= levels; ++k) {
      mean[k] += errors[r][k] / static_cast<double>(m);
      if (k > 0 && !decreasing(errors[r][k - 1], errors[r][k])) mono = false;
    }
    monotone_paths += mono ? 1 : 0;
  }
  bool mean_monotone = true;
  for (std::size_t k = 1; k <= levels; ++k) {
    if (!decreasing(mean[k - 1], mean[k])) mean_monotone = false;
  }

  // Least-squares rate of log2(mean error) against log2(steps).
  double rate = std::numeric_limits<double>::infinity();
  if (mean.back() > exact_floor) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(levels + 1);
    for (std::size_t k = 0; k <= levels; ++k) {
      const double x = static_cast<double>(k);
      const double y = std::log2(mean[k]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  }

  const fs::path dir(out);
  fs::create_directories(dir);
  {
    auto os = open_out(dir, "convergence.csv");
    os << "level,steps,mean_relative_error\n";
    for (std::size_t k = 0; k <= levels; ++k) {
      os << k << ',' << (base << k) << ',' << format_double(mean[k]) << '\n';
    }
    auto paths = open_out(dir, "convergence_paths.csv");
    paths << "replica";
    for (std::size_t k = 0; k <= levels; ++k) paths << ",error_" << (base << k);
    paths << '\n';
    for (std::size_t r = 0; r < m; ++r) {
      paths << r;
      for (double e : errors[r]) paths << ',' << format_double(e);
      paths << '\n';
    }
  }
  const std::size_t failures =
      static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  Summary sum;
  sum.add("command", "convergence");
  sum.add("model", c.model.name);
  sum.add_count("replicas", m);
  sum.add_count("solver_failures", failures);
  for (std::size_t k = 0; k <= levels; ++k) {
    sum.add("mean_relative_error[" + std::to_string(base << k) + "]", mean[k]);
  }
  sum.add("fitted_rate", rate);
  sum.add("mean_error_monotone", mean_monotone ? "yes" : "no");
  sum.add("per_path_monotone_fraction",
          static_cast<double>(monotone_paths) / static_cast<double>(m));
  if (!mean_monotone) sum.add("WARNING", "non-monotone error sequence");
  const bool pass = mean_monotone && failures == 0;
  sum.verdict("overall", pass);
  sum.write(dir / "summary.txt");
  sum.print(std::cout);
  const int status = pass ? exit_pass : exit_fail;
  finish(dir, c, "convergence", "", false, status);
  return status;
}

int cmd_replay(const std::string& manifest_path, const std::string& out) {
  const Manifest m = read_manifest(manifest_path);
  const RunConfig c = parse_config_string(m.config_text);
  int status = exit_fail;
  if (m.command == "simulate") {
    status = cmd_simulate(c, out);
  } else if (m.command == "verify") {
    status = cmd_verify(c, m.argument, out, m.double_kappa);
  } else if (m.command == "convergence") {
    status = cmd_convergence(c, out);
  } else {
    throw ConfigError("manifest names unknown command " + m.command);
  }
  const auto now = hash_directory(out);
  bool identical = now == m.artifacts && status == m.status;
  std::cout << "replay: " << (identical ? "identical" : "MISMATCH") << '\n';
  if (!identical) {
    for (const auto& [name, hash] : m.artifacts) {
      const auto it = std::find_if(now.begin(), now.end(),
                                   [&](const auto& p) { return p.first == name; });
      if (it == now.end()) {
        std::cout << "  missing " << name << '\n';
      } else if (it->second != hash) {
        std::cout << "  differs " << name << '\n';
      }
    }
    return exit_fail;
  }
  return status;
}

}  // namespace mfsde::cli
