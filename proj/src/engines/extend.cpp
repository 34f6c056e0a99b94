#include "riskgate/engines/extend.hpp"

#include <algorithm>

#include "riskgate/core/errors.hpp"

namespace riskgate {

ExtendConfig ExtendConfig::baseline() {
  return ExtendConfig{{std::string(columns::ip), std::string(columns::ua)}, SmoothingConfig{}};
}

void ExtendConfig::validate(const FeatureCatalog& catalog) const {
  if (features.empty()) throw Error(Errc::empty_feature_set, "EXTEND needs at least one feature");
  for (const auto& name : features) catalog.at(name).validate();
  smoothing.validate();
}

double extend_user_prior(const HistoryView& view, const UserId& user) {
  const double users = static_cast<double>(std::max<std::size_t>(1, view.user_count()));
  const double total = static_cast<double>(view.total_logins());
  const double own = static_cast<double>(view.user_logins(user));
  const double p_attack = 1.0 / users;
  const double p_legit = (own + 1.0) / (total + users);
  return p_attack / p_legit;
}

namespace {

template <typename OnRatio>
double evaluate(const HistoryView& view, const LoginEvent& event, const std::vector<const FeatureDescriptor*>& features,
                const SmoothingConfig& smoothing, OnRatio&& on_ratio) {
  double product = 1.0;
  for (const FeatureDescriptor* descriptor : features) {
    const FeatureProbabilities p = feature_probabilities(view, event.user, *descriptor, event, smoothing);
    const double ratio = p.global / p.user;
    on_ratio(descriptor->name, ratio);
    product *= ratio;
  }
  return product;
}

std::vector<const FeatureDescriptor*> resolve(const FeatureCatalog& catalog, const ExtendConfig& cfg) {
  cfg.validate(catalog);
  std::vector<const FeatureDescriptor*> out;
  out.reserve(cfg.features.size());
  for (const auto& name : cfg.features) out.push_back(&catalog.at(name));
  return out;
}

}  // namespace

RiskVerdict score_extend(const HistoryView& view, const LoginEvent& event, const FeatureCatalog& catalog,
                         const ExtendConfig& cfg, double threshold) {
  const auto features = resolve(catalog, cfg);
  RiskVerdict verdict;
  const double product = evaluate(view, event, features, cfg.smoothing, [&](const std::string& name, double ratio) {
    // Repeated features share one entry holding the combined ratio.
    auto [it, inserted] = verdict.contributions.try_emplace(name, ratio);
    if (!inserted) it->second *= ratio;
  });
  const double prior = extend_user_prior(view, event.user);
  verdict.contributions["userPrior"] = prior;
  verdict.score = product * prior;
  verdict.threshold = threshold;
  verdict.decision = decide(verdict.score, threshold);
  return verdict;
}

ExtendEngine::ExtendEngine(FeatureCatalog catalog, ExtendConfig cfg)
    : catalog_(std::move(catalog)), cfg_(std::move(cfg)), resolved_(resolve(catalog_, cfg_)) {}

RiskVerdict ExtendEngine::score(const HistoryView& view, const LoginEvent& event, double threshold) const {
  return score_extend(view, event, catalog_, cfg_, threshold);
}

double ExtendEngine::risk(const HistoryView& view, const LoginEvent& event) const {
  const double product = evaluate(view, event, resolved_, cfg_.smoothing, [](const std::string&, double) {});
  return product * extend_user_prior(view, event.user);
}

}  // namespace riskgate
