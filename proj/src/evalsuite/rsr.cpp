#include "riskgate/evalsuite/rsr.hpp"

#include <numeric>
#include <random>

#include "riskgate/core/errors.hpp"
#include "riskgate/engines/extend.hpp"
#include "riskgate/featurekit/derive.hpp"

namespace riskgate {

AttackSet generate_attacks(const HistoryStore& store, const FeatureCatalog& catalog, const IpLookupTable* lookup,
                           const synth::AttackerPool& pool, const std::vector<std::string>& raw_features,
                           const AttackSetConfig& cfg) {
  const std::size_t state = cfg.state.value_or(store.size());
  const HistoryView view = store.state_at(state);
  const synth::AttackSampler sampler(view, pool, lookup, raw_features);
  AttackSet out;
  const auto victims = view.users();
  out.reserve(victims.size() * cfg.per_user);
  for (std::size_t i = 0; i < victims.size(); ++i) {
    for (std::size_t k = 0; k < cfg.per_user; ++k) {
      std::mt19937_64 rng(synth::attack_seed(cfg.seed, i, k));
      LoginEvent event = sampler.sample(cfg.model, victims[i], rng);
      enrich(event, catalog, lookup);
      out.push_back(AttackSample{std::move(event), state});
    }
  }
  return out;
}

std::vector<double> score_attacks(const HistoryStore& store, const RiskEngine& engine, const AttackSet& attacks) {
  std::vector<double> out;
  out.reserve(attacks.size());
  for (const auto& a : attacks) out.push_back(engine.risk(store.state_at(a.state), a.event));
  return out;
}

FeatureCatalog with_constant_baseline(FeatureCatalog catalog) {
  if (!catalog.contains(kConstantBaseline)) {
    catalog.add(FeatureDescriptor{std::string(kConstantBaseline), FeatureKind::raw, std::nullopt, {}, {true, true}});
  }
  return catalog;
}

double rsr_basic(std::span<const double> attack_scores, std::span<const double> legitimate_scores) {
  if (attack_scores.empty() || legitimate_scores.empty()) {
    throw Error(Errc::empty_scores, "RSR needs attack and legitimate scores");
  }
  const double attack = std::accumulate(attack_scores.begin(), attack_scores.end(), 0.0) /
                        static_cast<double>(attack_scores.size());
  const double legit = std::accumulate(legitimate_scores.begin(), legitimate_scores.end(), 0.0) /
                       static_cast<double>(legitimate_scores.size());
  if (legit == 0.0) throw Error(Errc::zero_legitimate_mean, "mean legitimate score is zero");
  return attack / legit;
}

std::vector<double> FeatureSetScores::legitimate_scores() const {
  std::vector<double> out;
  out.reserve(legitimate.size());
  for (const auto& s : legitimate) out.push_back(s.score);
  return out;
}

FeatureSetScores score_feature_set(const HistoryStore& store, const FeatureCatalog& catalog,
                                   const std::vector<std::string>& features, const AttackSet& attacks,
                                   const SmoothingConfig& smoothing) {
  const ExtendEngine engine(catalog, ExtendConfig{features, smoothing});
  return FeatureSetScores{score_attacks(store, engine, attacks), score_legitimate(store, engine)};
}

RsrResult rsr(const HistoryStore& store, const FeatureCatalog& catalog, const std::vector<std::string>& features,
              const std::vector<std::string>& baseline, const AttackSet& attacks, const SmoothingConfig& smoothing) {
  const FeatureCatalog full = with_constant_baseline(catalog);
  const auto set = score_feature_set(store, full, features, attacks, smoothing);
  RsrResult out;
  out.basic = rsr_basic(set.attack, set.legitimate_scores());
  if (baseline == features) {
    out.baseline = out.basic;
  } else {
    const auto base = score_feature_set(store, full, baseline, attacks, smoothing);
    out.baseline = rsr_basic(base.attack, base.legitimate_scores());
  }
  out.normalized = out.basic - out.baseline;
  return out;
}

}  // namespace riskgate
