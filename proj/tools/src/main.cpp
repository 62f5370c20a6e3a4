#include "CLI11.hpp"

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "commands.hpp"
#include "config.hpp"

using namespace mfsde::cli;

int main(int argc, char** argv) {
  CLI::App app{"mfsde: simulation and verification of mixed fractional SDEs with jumps"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Run configuration file");
    sub->add_option("--seed", seed, "Root seed (overrides [seed] root)");
    sub->add_option("--out", out, "Output directory (overrides [output] directory)");
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate driver and solution paths");
  add_common(simulate);

  std::string suite;
  bool double_kappa = false;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "kernel|lemma|selfsim|moments|jumps|all")->required();
  verify->add_flag("--double-kappa", double_kappa,
                   "Debug control: scale by twice the self-similarity exponent");
  add_common(verify);

  auto* convergence = app.add_subcommand("convergence", "Euler refinement study");
  add_common(convergence);

  std::string manifest;
  auto* replay = app.add_subcommand("replay", "Regenerate an output directory from its manifest");
  replay->add_option("--manifest", manifest, "manifest.txt of a previous run")->required();
  replay->add_option("--out", out, "Directory for the regenerated output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_pass : exit_config;
  }

  try {
    if (replay->parsed()) return cmd_replay(manifest, out);

    RunConfig c = config_path.empty() ? parse_config_string("") : load_config(config_path);
    if (seed) c.seed = *seed;
    if (!out.empty()) c.output = out;
    validate(c);

    if (simulate->parsed()) return cmd_simulate(c, c.output);
    if (verify->parsed()) return cmd_verify(c, suite, c.output, double_kappa);
    if (convergence->parsed()) return cmd_convergence(c, c.output);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_fail;
  }
  return exit_config;
}
