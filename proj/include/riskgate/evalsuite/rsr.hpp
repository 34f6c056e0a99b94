#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskgate/core/history.hpp"
#include "riskgate/engines/verdict.hpp"
#include "riskgate/evalsuite/replay.hpp"
#include "riskgate/featurekit/catalog.hpp"
#include "riskgate/featurekit/probability.hpp"
#include "riskgate/synth/attacker.hpp"

namespace riskgate {

// An attack login and the history state (store prefix length) it is scored
// against.
struct AttackSample {
  LoginEvent event;
  std::size_t state = 0;
};
using AttackSet = std::vector<AttackSample>;

struct AttackSetConfig {
  AttackerModel model = AttackerModel::targeted;
  std::size_t per_user = 25;
  std::uint64_t seed = 0;
  // Store prefix the attacks target; nullopt means the full store.
  std::optional<std::size_t> state;
};

// per_user attacks on every user present in the state, enriched with the
// catalog's derivations. Attack k on the i-th user uses the generator seeded
// with attack_seed(seed, i, k) for every model, so different models draw
// common random numbers.
AttackSet generate_attacks(const HistoryStore& store, const FeatureCatalog& catalog, const IpLookupTable* lookup,
                           const synth::AttackerPool& pool, const std::vector<std::string>& raw_features,
                           const AttackSetConfig& cfg);

std::vector<double> score_attacks(const HistoryStore& store, const RiskEngine& engine, const AttackSet& attacks);

// Descriptor name of the zero-entropy baseline (its column never exists, so
// every login reads MISSING).
inline constexpr std::string_view kConstantBaseline = "_constant";
FeatureCatalog with_constant_baseline(FeatureCatalog catalog);

// mean(attack) / mean(legitimate). Throws EmptyScores or ZeroLegitimateMean.
double rsr_basic(std::span<const double> attack_scores, std::span<const double> legitimate_scores);

struct FeatureSetScores {
  std::vector<double> attack;
  std::vector<ScoredLogin> legitimate;

  std::vector<double> legitimate_scores() const;
};

// EXTEND scores of the feature set: attacks at their states, legitimate
// logins at their point-in-time states.
FeatureSetScores score_feature_set(const HistoryStore& store, const FeatureCatalog& catalog,
                                   const std::vector<std::string>& features, const AttackSet& attacks,
                                   const SmoothingConfig& smoothing = {});

struct RsrResult {
  double basic = 0.0;
  double baseline = 0.0;
  double normalized = 0.0;  // basic - baseline
};

RsrResult rsr(const HistoryStore& store, const FeatureCatalog& catalog, const std::vector<std::string>& features,
              const std::vector<std::string>& baseline, const AttackSet& attacks,
              const SmoothingConfig& smoothing = {});

}  // namespace riskgate
