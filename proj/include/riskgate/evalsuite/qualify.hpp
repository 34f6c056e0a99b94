#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskgate/core/history.hpp"
#include "riskgate/evalsuite/entropy.hpp"
#include "riskgate/evalsuite/rsr.hpp"
#include "riskgate/featurekit/catalog.hpp"

namespace riskgate {

enum class FeatureCategory { single, major_addon, addon, rejected };
std::string_view to_string(FeatureCategory category) noexcept;

struct QualifyConfig {
  double min_entropy = 0.1;      // Test A, both global and mean per-user
  std::size_t min_unique = 10;   // Test B, strictly more than this
  double min_rsr = 0.1;          // Test C, normalized RSR strictly above
  std::string addon_base = "ip";
  // Derived descriptors (functions of another feature) can be at most
  // major add-ons.
  bool single_requires_raw = true;
  double reauth_tpr = 0.8;
  std::size_t reauth_history_size = 12;
  SmoothingConfig smoothing;
  // Descriptors to benchmark; empty means every catalog descriptor.
  std::vector<std::string> features;
};

struct FeatureBenchmarkRow {
  std::string feature;
  EntropyPair entropy;
  UniqueCounts unique;
  RsrResult single;  // alone, against the constant baseline
  RsrResult addon;   // together with the add-on base, against the base alone
  // Median logins until re-authentication at the re-auth TPR and history
  // size, for the feature set that decided the category. nullopt when no
  // user reaches the history size.
  std::optional<double> logins_until_reauth;
  bool pass_a = false;
  bool pass_b = false;
  bool pass_c = false;  // Test C passed alone or as an add-on
  ReliabilityLabels labels;
  FeatureCategory category = FeatureCategory::rejected;
};

// Tests A, B and C for each descriptor against the attack set, which must
// target `store`. Rows are sorted by single-feature normalized RSR,
// descending, then by name.
std::vector<FeatureBenchmarkRow> qualify_features(const HistoryStore& store, const FeatureCatalog& catalog,
                                                  const AttackSet& attacks, const QualifyConfig& cfg = {});

}  // namespace riskgate
