#include "riskgate/evalsuite/qualify.hpp"

#include <algorithm>

#include "riskgate/core/errors.hpp"
#include "riskgate/evalsuite/calibrate.hpp"
#include "riskgate/evalsuite/metrics.hpp"

namespace riskgate {

namespace {

std::optional<double> reauth_column(const FeatureSetScores& scores, const QualifyConfig& cfg) {
  const CalibrationResult calibration = calibrate(scores.attack, cfg.reauth_tpr);
  const ReplayOutcome outcome = apply_threshold(scores.legitimate, calibration.threshold);
  for (const auto& a : outcome.aggregates) {
    if (a.size == cfg.reauth_history_size) return logins_until_reauth(a.size, a.median_count);
  }
  return std::nullopt;
}

double rsr_of(const FeatureSetScores& scores) { return rsr_basic(scores.attack, scores.legitimate_scores()); }

}  // namespace

std::string_view to_string(FeatureCategory category) noexcept {
  switch (category) {
    case FeatureCategory::single: return "single";
    case FeatureCategory::major_addon: return "majorAddon";
    case FeatureCategory::addon: return "addon";
    case FeatureCategory::rejected: return "rejected";
  }
  return "rejected";
}

std::vector<FeatureBenchmarkRow> qualify_features(const HistoryStore& store, const FeatureCatalog& catalog,
                                                  const AttackSet& attacks, const QualifyConfig& cfg) {
  const HistoryView view = store.view();
  if (view.user_count() < 2) throw Error(Errc::invalid_argument, "feature benchmark needs at least two users");
  const FeatureCatalog full = with_constant_baseline(catalog);
  std::vector<std::string> names = cfg.features.empty() ? catalog.names() : cfg.features;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  const std::vector<std::string> constant{std::string(kConstantBaseline)};
  const std::vector<std::string> base{cfg.addon_base};
  const double constant_rsr = rsr_of(score_feature_set(store, full, constant, attacks, cfg.smoothing));
  const double base_rsr = rsr_of(score_feature_set(store, full, base, attacks, cfg.smoothing));

  std::vector<FeatureBenchmarkRow> rows;
  for (const auto& name : names) {
    const FeatureDescriptor& d = full.at(name);
    FeatureBenchmarkRow row;
    row.feature = name;
    row.labels = d.labels;
    const std::string& column = d.primary_column();
    row.entropy = entropy_pair(view, column);
    row.unique = unique_value_counts(view, column);

    const auto single = score_feature_set(store, full, {name}, attacks, cfg.smoothing);
    row.single = RsrResult{rsr_of(single), constant_rsr, 0.0};
    row.single.normalized = row.single.basic - row.single.baseline;

    std::optional<FeatureSetScores> addon;
    if (name == cfg.addon_base) {
      row.addon = RsrResult{base_rsr, base_rsr, 0.0};
    } else {
      addon = score_feature_set(store, full, {cfg.addon_base, name}, attacks, cfg.smoothing);
      row.addon = RsrResult{rsr_of(*addon), base_rsr, 0.0};
      row.addon.normalized = row.addon.basic - row.addon.baseline;
    }

    row.pass_a = row.entropy.global > cfg.min_entropy && row.entropy.user_mean > cfg.min_entropy;
    row.pass_b = row.unique.global > cfg.min_unique && (!row.unique.desktop || *row.unique.desktop > cfg.min_unique) &&
                 (!row.unique.mobile || *row.unique.mobile > cfg.min_unique);
    const bool c_single = row.single.normalized > cfg.min_rsr;
    const bool c_addon = name != cfg.addon_base && row.addon.normalized > cfg.min_rsr;
    const bool ab = row.pass_a && row.pass_b;
    const bool single_eligible = d.labels.server_side && (!cfg.single_requires_raw || d.kind == FeatureKind::raw);
    if (ab && c_single && single_eligible) {
      row.category = FeatureCategory::single;
    } else if (ab && c_addon) {
      row.category = d.labels.server_side ? FeatureCategory::major_addon : FeatureCategory::addon;
    }
    row.pass_c = c_single || c_addon;
    const bool addon_row = row.category == FeatureCategory::major_addon || row.category == FeatureCategory::addon;
    row.logins_until_reauth = reauth_column(addon_row ? *addon : single, cfg);
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const FeatureBenchmarkRow& a, const FeatureBenchmarkRow& b) {
    if (a.single.normalized != b.single.normalized) return a.single.normalized > b.single.normalized;
    return a.feature < b.feature;
  });
  return rows;
}

}  // namespace riskgate
