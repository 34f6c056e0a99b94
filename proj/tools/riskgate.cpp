#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "riskgate/cli/commands.hpp"

int main(int argc, char** argv) {
  using riskgate::cli::CommandOptions;

  CLI::App app{"Risk-based authentication scoring, evaluation and benchmarking"};
  app.require_subcommand(1);
  CommandOptions options;
  std::string config, out, addr, store;
  std::uint64_t seed = 0;

  const auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "Run configuration (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--out", out, "Output directory");
    cmd->add_option("--seed", seed, "Seed for generation and attack sampling");
  };
  const char* commands[][2] = {
      {"generate", "Generate the synthetic population, lookup table and attacker pool"},
      {"replay", "Score legitimate logins and simulated attacks with every engine"},
      {"calibrate", "Compute thresholds for the target true positive rates"},
      {"featbench", "Run the feature qualification benchmark"},
      {"perfbench", "Measure scoring latency and fit the scaling regressions"},
      {"report", "Render re-authentication and feature reports"},
      {"serve", "Run the HTTP scoring sidecar"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    common(cmd);
    if (std::string(name) == "serve") {
      cmd->add_option("--addr", addr, "Listen address host:port (default: RISKGATE_ADDR)");
      cmd->add_option("--store", store, "Login journal path (default: RISKGATE_STORE)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : riskgate::cli::kExitConfig;
  }

  CLI::App* cmd = app.get_subcommands().front();
  if (!config.empty()) options.config = config;
  if (!out.empty()) options.out = out;
  if (cmd->count("--seed")) options.seed = seed;
  if (!addr.empty()) options.address = addr;
  if (!store.empty()) options.store = store;
  return riskgate::cli::run_command(cmd->get_name(), options, std::cout, std::cerr);
}
