#include <filesystem>
#include <fstream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"
#include "manifest.hpp"

using namespace mfsde::cli;
namespace fs = std::filesystem;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return 0;
}

std::string error_text(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mfsde_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config round trip") {
  const std::string text = R"(
# comment
[model]
name = linear
x0 = 2.5
sigma_w = 0.3

[noise]
hurst = 0.8
rate = 1.5
marks = two_point
mark_low = -0.25

[frac]
alpha = 0.35
; comment line

[grid]
steps = 100

[mc]
p_list = 1, 3
selfsim_intervals = 0:0.5, 0.25:0.75
threads = 2

[seed]
root = 18446744073709551615

[output]
directory = some/dir
)";
  const RunConfig a = parse_config_string(text);
  CHECK(a.model.name == "linear");
  CHECK(a.model.params.at("sigma_w") == 0.3);
  CHECK(a.noise.marks == "two_point");
  CHECK(*a.frac.alpha == 0.35);
  CHECK(a.mc.p_list == std::vector<double>{1, 3});
  CHECK(a.mc.selfsim_intervals.size() == 2);
  CHECK(a.seed == 18446744073709551615ull);
  CHECK(a.output == "some/dir");
  CHECK(a.lines.at("frac.alpha") == 15);
  CHECK(a.lines.at("grid.steps") == 19);

  const RunConfig b = parse_config_string(serialize_config(a));
  CHECK(b == a);
  CHECK(serialize_config(b) == serialize_config(a));

  const RunConfig d = parse_config_string("");
  CHECK(parse_config_string(serialize_config(d)) == d);
  CHECK(d.alpha() == doctest::Approx(0.375));
}

TEST_CASE("config errors carry line numbers") {
  CHECK(error_line("[model]\nname = linear\n\n[frac]\nalfa = 0.3\n") == 5);
  CHECK(error_line("[bogus]\n") == 1);
  CHECK(error_line("[grid]\nsteps = -3\n") == 2);
  CHECK(error_line("[grid]\nsteps\n") == 2);
  CHECK(error_line("steps = 3\n") == 1);
  CHECK(error_line("[model]\nname = linear\nsigma = 1\n") == 3);
  CHECK(error_line("[model]\nname = nonexistent\n") == 2);
  CHECK(error_line("[grid]\nsteps = 4\nsteps = 5\n") == 3);

  const std::string alpha = error_text("[frac]\nalpha = 0.6\n");
  CHECK(alpha.find("alpha must lie in (1-H, 1/2)") != std::string::npos);
  CHECK(alpha.find("line 2") != std::string::npos);
  CHECK(error_text("[noise]\nhurst = 0.4\n").find("H must lie in (1/2, 1)") != std::string::npos);
  CHECK(error_text("[frac]\neta = 0.3\n").find("eta") != std::string::npos);
}

TEST_CASE("manifest hashing and round trip") {
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

  const fs::path dir = scratch("manifest");
  fs::create_directories(dir);
  std::ofstream(dir / "b.csv") << "t,value\n0,1\n";
  std::ofstream(dir / "a.txt") << "abc";
  Manifest m;
  m.command = "verify";
  m.argument = "kernel";
  m.double_kappa = true;
  m.status = 1;
  m.config_text = serialize_config(RunConfig{});
  m.artifacts = hash_directory(dir.string());
  REQUIRE(m.artifacts.size() == 2);
  CHECK(m.artifacts[0].first == "a.txt");
  CHECK(m.artifacts[0].second == sha256_hex("abc"));
  write_manifest(dir.string(), m);
  CHECK(hash_directory(dir.string()).size() == 2);

  const Manifest r = read_manifest((dir / "manifest.txt").string());
  CHECK(r.command == m.command);
  CHECK(r.argument == m.argument);
  CHECK(r.double_kappa);
  CHECK(r.status == 1);
  CHECK(r.config_text == m.config_text);
  CHECK(r.artifacts == m.artifacts);
  fs::remove_all(dir);
}

TEST_CASE("simulate writes reproducible artifacts") {
  RunConfig c = parse_config_string("[model]\nname = zero\nx0 = 3\n[grid]\nsteps = 32\n");
  const fs::path a = scratch("sim_a"), b = scratch("sim_b");
  CHECK(cmd_simulate(c, a.string()) == exit_pass);
  CHECK(cmd_simulate(c, b.string()) == exit_pass);
  CHECK(hash_directory(a.string()) == hash_directory(b.string()));
  CHECK(fs::exists(a / "solution_0.csv"));
  CHECK(fs::exists(a / "wiener_0.csv"));
  CHECK(fs::exists(a / "fbm_0.csv"));
  CHECK(fs::exists(a / "jumps_0.csv"));

  std::ifstream sol(a / "solution_0.csv");
  std::string line;
  std::getline(sol, line);
  CHECK(line == "t,value,left_limit_flag");
  while (std::getline(sol, line)) CHECK(line.substr(line.find(',')) == ",3,0");

  CHECK(cmd_replay((a / "manifest.txt").string(), scratch("sim_c").string()) == exit_pass);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("verify on the zero model passes every suite") {
  RunConfig c = parse_config_string(
      "[model]\nname = zero\n[grid]\nsteps = 64\n"
      "[mc]\nreplicas = 200\nlemma_replicas = 40\nselfsim_replicas = 300\nselfsim_steps = 128\n"
      "product_replicas = 2000\nkernel_points = 4\n");
  const fs::path out = scratch("verify_zero");
  CHECK(cmd_verify(c, "all", out.string()) == exit_pass);
  CHECK(fs::exists(out / "summary.txt"));
  CHECK(fs::exists(out / "moments.csv"));
  CHECK_THROWS_AS(cmd_verify(c, "everything", out.string()), ConfigError);
  fs::remove_all(out);
}

TEST_CASE("convergence command") {
  SUBCASE("c = 1 is exact at every level") {
    RunConfig c = parse_config_string(
        "[model]\nname = additive_fbm\n[mc]\nconvergence_base_steps = 64\nconvergence_replicas = 10\n");
    CHECK(cmd_convergence(c, scratch("conv_c1").string()) == exit_pass);
  }
  SUBCASE("pure jumps are exact at every level") {
    RunConfig c = parse_config_string(
        "[model]\nname = pure_jump\n[noise]\nrate = 4\n"
        "[mc]\nconvergence_base_steps = 64\nconvergence_replicas = 10\n");
    const fs::path out = scratch("conv_pj");
    CHECK(cmd_convergence(c, out.string()) == exit_pass);
    std::ifstream is(out / "convergence.csv");
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
      const double err = std::stod(line.substr(line.rfind(',') + 1));
      CHECK(err <= 1e-12);
    }
  }
  SUBCASE("models without a closed form are a configuration error") {
    CHECK_THROWS_AS(cmd_convergence(parse_config_string(""), scratch("conv_x").string()), ConfigError);
  }
}
