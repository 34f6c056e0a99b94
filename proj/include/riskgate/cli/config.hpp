#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskgate/engines/extend.hpp"
#include "riskgate/engines/simple.hpp"
#include "riskgate/evalsuite/qualify.hpp"
#include "riskgate/perfbench/timing.hpp"
#include "riskgate/synth/population.hpp"

namespace riskgate::cli {

struct DatasetSource {
  std::filesystem::path dataset;
  std::optional<std::filesystem::path> lookup;
  std::optional<std::filesystem::path> pool;
};

struct EngineSection {
  ExtendConfig extend = ExtendConfig::baseline();
  std::vector<SimpleConfig> simple = {SimpleConfig::all(), SimpleConfig::ipua()};
  // Subfeature weights per descriptor, replacing the catalog's.
  std::vector<std::pair<std::string, std::vector<Subfeature>>> weights;
};

struct AttackerSection {
  std::vector<AttackerModel> models = {AttackerModel::naive, AttackerModel::vpn, AttackerModel::targeted};
  std::optional<std::filesystem::path> pool;  // overrides the generated or dataset pool
  std::size_t attacks_per_user = 25;
};

struct EvaluationSection {
  std::vector<double> target_tprs = {0.9992, 0.9991, 0.9947, 0.99, 0.9857, 0.9829, 0.9799, 0.7474};
  std::size_t min_users_per_bucket = 30;
  std::size_t reauth_history_size = 12;
};

struct PerfbenchSection {
  TimingOptions timing;
  std::vector<std::size_t> history_sizes = {1000, 10000, 100000};
  std::vector<std::size_t> feature_counts = {1, 2, 3, 4, 5, 6, 7, 8};
  std::size_t feature_history_size = 10000;
  std::size_t users = 8500;  // generated population size when no dataset is given
  std::vector<std::string> candidates;  // empty: every descriptor the data supports
  double simple_slope_bound_ms = 1e-6;  // per login
  double latency_budget_ms = 300.0;
};

struct ServiceSection {
  std::string address = "127.0.0.1:8080";
  std::optional<std::filesystem::path> store;
  bool hash_values = true;
  std::string hash_salt;
  std::string default_engine = "extend";
  AttackerModel threshold_model = AttackerModel::targeted;
  double threshold_tpr = 0.99;
};

struct RunConfig {
  std::uint64_t seed = 42;
  std::filesystem::path output = "out";
  std::optional<synth::PopulationConfig> generator;
  std::optional<DatasetSource> dataset;
  EngineSection engine;
  AttackerSection attacker;
  EvaluationSection evaluation;
  QualifyConfig featbench;
  PerfbenchSection perfbench;
  ServiceSection service;

  // The configuration as JSON with every default filled in; its SHA-256 is
  // the manifest's config hash.
  nlohmann::ordered_json to_json() const;
  // Throws ConfigInvalid naming the field path.
  void validate() const;
};

// Sections are optional; absent fields keep their defaults. Relative paths
// resolve against `base`. Throws ConfigInvalid with the field path.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base = {});
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace riskgate::cli
