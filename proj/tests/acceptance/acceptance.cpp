// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff all pass.
//
//   mfsde_acceptance --cli <path to mfsde> --configs <configs dir> [--work <dir>]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "commands.hpp"
#include "config.hpp"
#include "manifest.hpp"
#include "mfsde/analysis.hpp"
#include "mfsde/frac_calc.hpp"
#include "mfsde/noise.hpp"
#include "mfsde/solver.hpp"

using namespace mfsde;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

fs::path g_cli;
fs::path g_configs;
fs::path g_work;

cli::RunConfig config(const std::string& name) {
  return cli::load_config((g_configs / name).string());
}

GridFunction sample(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  std::vector<double> v(n + 1);
  const double h = (b - a) / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) v[i] = f(a + h * static_cast<double>(i));
  return GridFunction(a, h, std::move(v));
}

// ---------------------------------------------------------------------------

Outcome fbm_law() {
  constexpr std::size_t m = 100000;
  constexpr std::size_t points = 8;
  const GridSpec grid(1.0, points);
  double worst = 0.0;
  for (double h : {0.6, 0.75, 0.9}) {
    std::vector<std::vector<double>> x(points, std::vector<double>(m));
    for (std::size_t r = 0; r < m; ++r) {
      const auto p = gen_fbm(grid, h, Seed{101, stream::fbm}.replica(r));
      for (std::size_t i = 0; i < points; ++i) x[i][r] = p[i + 1];
    }
    for (std::size_t i = 0; i < points; ++i) {
      for (std::size_t j = i; j < points; ++j) {
        // E[B_s B_t] is the product mean (the process is centred).
        double mean = 0.0;
        for (std::size_t r = 0; r < m; ++r) mean += x[i][r] * x[j][r];
        mean /= m;
        double var = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          const double d = x[i][r] * x[j][r] - mean;
          var += d * d;
        }
        const double se = std::sqrt(var / (m - 1) / m);
        const double s = grid.time(i + 1), t = grid.time(j + 1);
        const double exact = 0.5 * (std::pow(s, 2 * h) + std::pow(t, 2 * h) -
                                    std::pow(t - s, 2 * h));
        worst = std::max(worst, std::abs(mean - exact) / se);
      }
    }
  }
  return {worst < 4.0, "max |z| = " + fmt(worst) + " over 3 x 36 entries (limit 4)"};
}

Outcome integral_construction() {
  const double h = 0.75;
  const double alpha = FracParams::default_alpha(h);
  constexpr std::size_t n0 = 256;
  constexpr std::size_t seeds = 100;
  std::size_t monotone = 0;
  std::size_t one_fails = 0;
  double worst_one = 0.0;
  double pooled_err = 0.0;
  double pooled_ref = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto path = gen_fbm(GridSpec(1.0, 16 * n0), h, Seed{202, stream::fbm}.replica(s));
    std::vector<double> diff;
    for (std::size_t factor : {16, 8, 4, 2}) {
      const auto g = GridFunction::from_path(path.coarsened(factor));
      const auto f = sample([](double x) { return std::pow(x, 0.6); }, 0.0, 1.0, g.cells());
      diff.push_back(std::abs(gls_integral(f, g, alpha, h) - forward_sum_integral(f, g)));
    }
    monotone += diff[1] < diff[0] && diff[2] < diff[1] && diff[3] < diff[2];

    const auto g = GridFunction::from_path(path);
    const auto one = sample([](double) { return 1.0; }, 0.0, 1.0, g.cells());
    const double want = g.values.back() - g.values.front();
    const double err = std::abs(gls_integral(one, g, alpha, h) - want);
    worst_one = std::max(worst_one, err / std::abs(want));
    one_fails += err >= 1e-3 * std::abs(want);
    pooled_err += err;
    pooled_ref += std::abs(want);
  }

  constexpr std::size_t n = 16 * n0;
  const auto smooth = sample([](double x) { return std::sin(3.0 * x) + x * x; }, 0.0, 1.0, n);
  const auto one = sample([](double) { return 1.0; }, 0.0, 1.0, n);
  const double smooth_want = smooth.values.back() - smooth.values.front();
  const double smooth_err =
      std::abs(gls_integral(one, smooth, alpha) - smooth_want) / std::abs(smooth_want);

  const bool pass = monotone >= 90 && worst_one < 1e-3 && smooth_err < 1e-3;
  return {pass, std::to_string(monotone) + "/100 seeds monotone (limit 90); f = 1 on fBm n = " +
                    std::to_string(n) + ": max rel err " + fmt(worst_one) + " (limit 1e-3, " +
                    std::to_string(one_fails) + "/100 seeds above, pooled " +
                    fmt(pooled_err / pooled_ref) + "); f = 1 on smooth g: " + fmt(smooth_err)};
}

// Relative error at node i is independent of n for a power function (scale
// invariance), so the first cells never reach 1e-3. The check uses nodes at
// least 1% of the interval away from the singular endpoint plus the relative
// L1 error over the whole interval; the all-node maximum is reported.
Outcome derivative_oracles() {
  constexpr std::size_t n = 4096;
  const double gamma = 0.9;
  double worst = 0.0, worst_l1 = 0.0, all_nodes = 0.0;
  auto account = [&](const GridFunction& got, std::size_t skip_first, std::size_t skip_last,
                     const std::function<double(double)>& exact, const std::function<double(double)>& dist) {
    double err = 0.0, norm = 0.0;
    for (std::size_t i = skip_first; i + skip_last < got.size(); ++i) {
      const double x = got.node(i);
      const double e = exact(x);
      const double rel = std::abs(got.values[i] - e) / e;
      all_nodes = std::max(all_nodes, rel);
      if (dist(x) >= 0.01) worst = std::max(worst, rel);
      err += std::abs(got.values[i] - e);
      norm += e;
    }
    worst_l1 = std::max(worst_l1, err / norm);
  };
  for (double alpha : {0.2, 0.3, 0.45}) {
    const auto f = sample([gamma](double x) { return std::pow(x, gamma); }, 0.0, 1.0, n);
    const double cl = std::tgamma(gamma + 1) / std::tgamma(gamma + 1 - alpha);
    account(rl_left_derivative(f, alpha).values, 1, 0,
            [&](double x) { return cl * std::pow(x, gamma - alpha); }, [](double x) { return x; });
    // D^{1-alpha}_{b-} (b - x)^gamma = Gamma(gamma+1)/Gamma(gamma+alpha) (b - x)^{gamma-1+alpha}.
    const auto g = sample([gamma](double x) { return std::pow(1.0 - x, gamma); }, 0.0, 1.0, n);
    const double cr = std::tgamma(gamma + 1) / std::tgamma(gamma + alpha);
    account(rl_right_derivative(g, alpha).values, 0, 1,
            [&](double x) { return cr * std::pow(1.0 - x, gamma - 1 + alpha); },
            [](double x) { return 1.0 - x; });
  }
  return {worst < 1e-3 && worst_l1 < 1e-3,
          "max rel err " + fmt(worst) + " at distance >= 0.01 from the endpoint, relative L1 " +
              fmt(worst_l1) + " (limits 1e-3); all-node max " + fmt(all_nodes) + " (diagnostic)"};
}

Outcome kernel_estimates() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool pass = true;
  for (double alpha : {0.3, 0.375, 0.45}) {
    const auto rep = verify_kernel_estimates(alpha, {1, 10, 100, 1000}, 20);
    worst = std::max(worst, rep.max_ratio);
    pass = pass && rep.pass;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  pass = pass && secs < 60.0;
  return {pass, "max ratio " + fmt(worst, 6) + " (limit 1.001), " + fmt(secs, 3) + " s"};
}

Outcome solver_oracle() {
  const auto c = config("convergence.ini");
  const auto model = c.coefficients();
  const std::size_t levels = c.mc.convergence_levels;
  const std::size_t fine = c.mc.convergence_base_steps << levels;
  const std::size_t m = c.mc.convergence_replicas;
  std::vector<double> mean(levels + 1, 0.0);
  std::size_t per_seed = 0;
  for (std::size_t r = 0; r < m; ++r) {
    const auto d = gen_driving_triple(GridSpec(c.grid.horizon, fine), c.noise.hurst, 0.0,
                                      c.mark_law(), Seed{c.seed, 0}.replica(r));
    const double exact = model.closed_form(c.model.x0, c.grid.horizon, d.wiener.values.back(),
                                           d.fbm.values.back(), d.jumps);
    std::vector<double> e;
    for (std::size_t k = 0; k <= levels; ++k) {
      const std::size_t factor = std::size_t{1} << (levels - k);
      const auto x = solve_segment(model, c.model.x0, d.wiener.coarsened(factor),
                                   d.fbm.coarsened(factor));
      e.push_back(std::abs(x.values.back() - exact) / std::abs(exact));
      mean[k] += e.back() / static_cast<double>(m);
    }
    bool mono = true;
    for (std::size_t k = 1; k <= levels; ++k) mono = mono && e[k] < e[k - 1];
    per_seed += mono;
  }
  bool monotone = true;
  std::string seq;
  for (std::size_t k = 0; k <= levels; ++k) {
    if (k) monotone = monotone && mean[k] < mean[k - 1];
    seq += (k ? ", " : "") + fmt(mean[k], 3);
  }
  const bool pass = fine == (1u << 14) && mean.back() < 0.02 && monotone;
  return {pass, "mean rel err " + seq + " at n = " + std::to_string(c.mc.convergence_base_steps) +
                    " .. " + std::to_string(fine) + " (limit 2e-2 at 2^14, monotone " +
                    (monotone ? "yes" : "no") + "); per-seed monotone " +
                    std::to_string(per_seed) + "/" + std::to_string(m) + " (diagnostic)"};
}

Outcome jump_construction() {
  bool ok = true;
  std::size_t jumps = 0;
  const auto pure = make_model("pure_jump");
  const auto mixed = make_model("jump_mixed");
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto d = gen_driving_triple(GridSpec(1.0, 128), 0.75, 5.0, GaussianMarks{}, Seed{606, 0}.replica(s));
    const auto x = solve_with_jumps(pure, 1.0, d.wiener, d.fbm, d.jumps);
    for (std::size_t i = 0; i < x.path.size(); ++i) {
      double want = 1.0;
      for (std::size_t n = 0; n < d.jumps.count(); ++n) {
        if (d.jumps.times[n] <= x.path.grid.time(i)) want += d.jumps.marks[n];
      }
      ok = ok && std::abs(x.path[i] - want) <= 1e-12 * std::max(1.0, std::abs(want));
    }
    JumpTrain empty;
    empty.horizon = 1.0;
    for (const auto& name : model_names()) {
      const auto model = make_model(name);
      ok = ok && solve_with_jumps(model, 0.5, d.wiener, d.fbm, empty).path.values ==
                     solve_segment(model, 0.5, d.wiener, d.fbm).values;
    }
    const auto y = solve_with_jumps(mixed, 1.0, d.wiener, d.fbm, d.jumps);
    ok = ok && y.records.size() == d.jumps.count();
    for (const auto& r : y.records) {
      ok = ok && (r.value == r.left_limit + mixed.q(r.time, r.left_limit, r.mark));
    }
    jumps += d.jumps.count();
  }
  return {ok, "50 seeds, " + std::to_string(jumps) + " jumps: pure-jump sums, empty-train identity, jump identity"};
}

Outcome lemma_bound() {
  const auto c = config("lemma.ini");
  const auto start = std::chrono::steady_clock::now();
  EnsembleSpec s;
  s.model = c.coefficients();
  s.x0 = c.model.x0;
  s.grid = GridSpec(c.grid.horizon, c.grid.steps);
  s.hurst = c.noise.hurst;
  s.seed = Seed{c.seed, 0};
  s.replicas = c.mc.lemma_replicas;
  s.keep_paths = true;
  const auto rep = verify_pathwise_lemma(simulate_ensemble(s), c.alpha(), c.thresholds());
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool pass = rep.pass && rep.paths.size() == 400 && c.model.name == "linear_c" &&
                    c.noise.hurst == 0.75 && c.alpha() == 0.3 && secs < 600.0;
  return {pass, "K = " + fmt(rep.k_fit) + ", holdout " + fmt(rep.holdout_rate) +
                    " (limit 0.95), " + fmt(secs, 3) + " s"};
}

Outcome moments() {
  const auto c = config("moments.ini");
  const auto start = std::chrono::steady_clock::now();
  EnsembleSpec s;
  s.model = c.coefficients();
  s.x0 = c.model.x0;
  s.grid = GridSpec(c.grid.horizon, c.grid.steps);
  s.hurst = c.noise.hurst;
  s.rate = c.noise.rate;
  s.marks = c.mark_law();
  s.seed = Seed{c.seed, 0};
  s.replicas = c.mc.replicas;
  const auto ens = simulate_ensemble(s);
  const auto table = estimate_moments(ens, c.mc.p_list, c.thresholds());
  const auto tail = tail_diagnostic(ens, c.mc.tail_p_max);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto assumptions = check_assumptions(s.model, SamplingBox{}, 20000);
  const bool pass = table.stable() && tail.slope > 9.0 && table.excluded == 0 &&
                    c.mc.replicas == 10000 && s.marks.bounded() &&
                    std::isfinite(s.model.constants.b_bound) && assumptions.pass() &&
                    secs < 900.0;
  return {pass, "p in {1,2,4,8} stable " + std::string(table.stable() ? "yes" : "no") +
                    ", tail slope " + fmt(tail.slope) + " (limit 9), " + fmt(secs, 3) + " s"};
}

Outcome self_similarity() {
  const auto c = config("selfsim.ini");
  std::vector<Interval> iv;
  for (const auto& [a, b] : c.mc.selfsim_intervals) iv.push_back({a, b});
  const auto ok = verify_self_similarity(c.noise.hurst, c.alpha(), iv, c.mc.selfsim_replicas,
                                         Seed{c.seed, 0}, c.mc.selfsim_steps, 1.0, c.thresholds());
  const auto control = verify_self_similarity(c.noise.hurst, c.alpha(), iv, c.mc.selfsim_replicas,
                                              Seed{c.seed, 0}, c.mc.selfsim_steps, 2.0,
                                              c.thresholds());
  std::string detail = "kappa = " + fmt(ok.kappa) + "; p-values";
  for (const auto& r : ok.rows) detail += " " + fmt(r.p_value, 3);
  detail += "; 2 kappa control p-values";
  for (const auto& r : control.rows) detail += " " + fmt(r.p_value, 3);
  const bool pass = ok.pass && !control.pass && c.mc.selfsim_replicas == 1000 && iv.size() == 2;
  return {pass, detail};
}

Outcome product_moment() {
  const auto c = config("jumps.ini");
  const auto rep = verify_jump_product_moment(c.noise.rate, c.mark_law(), c.product_g_function(),
                                              c.mc.product_p, c.grid.horizon,
                                              c.mc.product_replicas, Seed{c.seed, 0},
                                              c.thresholds());
  const bool pass = rep.pass && c.noise.marks == "two_point" && rep.replicas == 100000;
  return {pass, "empirical " + fmt(rep.empirical, 6) + " vs exact " + fmt(rep.exact, 6) +
                    ", z = " + fmt(rep.z_score, 3) + " (limit 4)"};
}

int run(const std::string& args) {
  const std::string cmd = "\"" + g_cli.string() + "\" " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome reproducibility() {
  if (g_cli.empty()) return {false, "no --cli binary given"};
  struct Case {
    std::string args;
    std::string config;
    int expected;
  };
  const std::vector<Case> cases{
      {"simulate", "default.ini", 0},
      {"verify kernel", "default.ini", 0},
      {"verify lemma", "lemma.ini", 0},
      {"verify selfsim", "selfsim.ini", 0},
      {"verify selfsim --double-kappa", "selfsim.ini", 1},
      {"verify moments", "moments.ini", 0},
      {"verify jumps", "jumps.ini", 0},
      {"convergence", "convergence.ini", 0},
  };
  bool ok = true;
  std::string detail;
  std::size_t k = 0;
  for (const auto& cs : cases) {
    const fs::path first = g_work / ("run_" + std::to_string(k));
    const fs::path again = g_work / ("replay_" + std::to_string(k));
    ++k;
    fs::remove_all(first);
    fs::remove_all(again);
    const int rc = run(cs.args + " --config \"" + (g_configs / cs.config).string() +
                       "\" --out \"" + first.string() + "\"");
    const int replay_rc = run("replay --manifest \"" + (first / "manifest.txt").string() +
                              "\" --out \"" + again.string() + "\"");
    const bool same = fs::exists(again / "manifest.txt") &&
                      cli::hash_directory(first.string()) == cli::hash_directory(again.string());
    const bool good = rc == cs.expected && replay_rc == cs.expected && same;
    if (!good) {
      detail += " [" + cs.args + ": exit " + std::to_string(rc) + ", replay " +
                std::to_string(replay_rc) + (same ? "" : ", artifacts differ") + "]";
    }
    ok = ok && good;
  }
  // Configuration errors exit with 2.
  const fs::path bad = g_work / "bad.ini";
  {
    std::ofstream os(bad);
    os << "[frac]\nalpha = 0.6\n";
  }
  const int bad_rc = run("simulate --config \"" + bad.string() + "\" --out \"" +
                         (g_work / "bad").string() + "\"");
  {
    std::ofstream os(bad);
    os << "[grid]\nstepz = 4\n";
  }
  const int unknown_rc = run("simulate --config \"" + bad.string() + "\" --out \"" +
                             (g_work / "bad").string() + "\"");
  const int no_closed_form = run("convergence --config \"" + (g_configs / "default.ini").string() +
                                 "\" --out \"" + (g_work / "bad").string() + "\"");
  ok = ok && bad_rc == 2 && unknown_rc == 2 && no_closed_form == 2;
  if (bad_rc != 2 || unknown_rc != 2 || no_closed_form != 2) detail += " [config errors did not exit 2]";
  return {ok, std::to_string(cases.size()) + " runs replayed bit-identically with exit codes 0/1 as expected, config errors exit 2" +
                  (detail.empty() ? "" : ";" + detail)};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) g_cli = argv[++i];
    else if (a == "--configs" && i + 1 < argc) g_configs = argv[++i];
    else if (a == "--work" && i + 1 < argc) g_work = argv[++i];
    else if (a == "--only" && i + 1 < argc) only.push_back(std::atoi(argv[++i]));
    else {
      std::cerr << "usage: mfsde_acceptance --cli <mfsde> --configs <dir> [--work <dir>] [--only N]...\n";
      return 2;
    }
  }
  if (g_work.empty()) g_work = fs::temp_directory_path() / "mfsde_acceptance";
  fs::create_directories(g_work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"fBm covariance law", fbm_law},
      {"integral construction", integral_construction},
      {"fractional-derivative oracles", derivative_oracles},
      {"kernel estimates", kernel_estimates},
      {"solver oracle", solver_oracle},
      {"jump construction", jump_construction},
      {"pathwise bound", lemma_bound},
      {"moments", moments},
      {"self-similarity", self_similarity},
      {"compound-Poisson product moment", product_moment},
      {"reproducibility", reproducibility},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << ": " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
