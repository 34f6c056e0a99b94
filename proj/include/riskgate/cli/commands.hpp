#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskgate/cli/config.hpp"
#include "riskgate/core/dataset.hpp"
#include "riskgate/core/errors.hpp"
#include "riskgate/core/history.hpp"
#include "riskgate/featurekit/ip_lookup.hpp"
#include "riskgate/synth/attacker.hpp"

namespace riskgate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitArtifact = 3;

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> address;  // serve only
  std::optional<std::filesystem::path> store;
};

// Loads the config file (built-in defaults with the generator section when
// none is given), applies flag overrides and validates. The service address
// and store fall back to RISKGATE_ADDR / RISKGATE_STORE before the config.
RunConfig resolve_config(const CommandOptions& options);
RunConfig default_run_config();

// The data a command works on: the generated artifacts in the output
// directory, or the configured dataset files.
struct RunInputs {
  Dataset dataset;
  std::optional<IpLookupTable> lookup;
  synth::AttackerPool pool;
  std::vector<std::filesystem::path> files;
};

// Throws ArtifactMissing when a generated artifact has not been produced.
RunInputs load_inputs(const RunConfig& cfg);
// Built-in catalog with the configured weights and passthrough descriptors
// for unknown dataset columns; the ip rule is dropped without a lookup table.
FeatureCatalog run_catalog(const RunConfig& cfg, const RunInputs& inputs);
HistoryStore build_store(const Dataset& dataset, const FeatureCatalog& catalog, const IpLookupTable* lookup);
std::vector<std::unique_ptr<RiskEngine>> run_engines(const RunConfig& cfg, const FeatureCatalog& catalog);

void cmd_generate(const RunConfig& cfg, std::ostream& log);
void cmd_replay(const RunConfig& cfg, std::ostream& log);
void cmd_calibrate(const RunConfig& cfg, std::ostream& log);
void cmd_featbench(const RunConfig& cfg, std::ostream& log);
void cmd_perfbench(const RunConfig& cfg, std::ostream& log);
void cmd_report(const RunConfig& cfg, std::ostream& log);
void cmd_serve(const RunConfig& cfg, std::ostream& log);

// Error-to-exit-code mapping: configuration errors 2, missing or unreadable
// artifacts 3, anything else 1.
int exit_code_for(Errc code) noexcept;

// Resolves the config, runs the named command and maps errors to exit codes,
// reporting them on `err`.
int run_command(std::string_view name, const CommandOptions& options, std::ostream& log, std::ostream& err);

}  // namespace riskgate::cli
