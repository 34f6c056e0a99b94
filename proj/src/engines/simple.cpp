#include "riskgate/engines/simple.hpp"

#include "riskgate/core/errors.hpp"
#include "riskgate/featurekit/catalog.hpp"

namespace riskgate {

SimpleConfig SimpleConfig::ipua() {
  return SimpleConfig{SimpleVariant::ipua,
                      {std::string(columns::ip), std::string(columns::ip_country), std::string(columns::ua)},
                      31};
}

SimpleConfig SimpleConfig::all() {
  SimpleConfig cfg = ipua();
  cfg.variant = SimpleVariant::all;
  cfg.features.emplace_back(columns::fingerprint);
  cfg.features.emplace_back(kLastLoginFeature);
  return cfg;
}

SimpleConfig SimpleConfig::custom(std::vector<std::string> features) {
  return SimpleConfig{SimpleVariant::custom, std::move(features), 31};
}

void SimpleConfig::validate() const {
  if (features.empty()) throw Error(Errc::empty_feature_set, "SIMPLE needs at least one feature");
  if (last_login_window_days < 0) throw Error(Errc::invalid_config, "lastLoginWindowDays must be >= 0");
}

std::string_view to_string(SimpleVariant variant) noexcept {
  switch (variant) {
    case SimpleVariant::ipua: return "ipua";
    case SimpleVariant::all: return "all";
    case SimpleVariant::custom: return "custom";
  }
  return "custom";
}

namespace {

bool feature_matches(const HistoryView& view, const LoginEvent& event, const std::string& feature,
                     const SimpleConfig& cfg) {
  if (feature == kLastLoginFeature) {
    auto last = view.last_login(event.user);
    if (!last) return false;
    const Timestamp window = static_cast<Timestamp>(cfg.last_login_window_days) * 86400;
    return event.timestamp >= *last && event.timestamp - *last <= window;
  }
  const FeatureValue& value = event.value(feature);
  if (value.is_missing()) return false;
  return view.user_value_count(event.user, feature, value) > 0;
}

}  // namespace

double simple_risk(const HistoryView& view, const LoginEvent& event, const SimpleConfig& cfg) {
  cfg.validate();
  std::size_t matches = 0;
  for (const auto& feature : cfg.features) matches += feature_matches(view, event, feature, cfg) ? 1 : 0;
  const auto d = cfg.features.size();
  return static_cast<double>(d - matches) / static_cast<double>(d);
}

RiskVerdict score_simple(const HistoryView& view, const LoginEvent& event, const SimpleConfig& cfg,
                         double threshold) {
  cfg.validate();
  RiskVerdict verdict;
  std::size_t matches = 0;
  for (const auto& feature : cfg.features) {
    const bool match = feature_matches(view, event, feature, cfg);
    matches += match ? 1 : 0;
    verdict.contributions[feature] = match ? 1.0 : 0.0;
  }
  const auto d = cfg.features.size();
  verdict.contributions["matchRatio"] = static_cast<double>(matches) / static_cast<double>(d);
  verdict.score = static_cast<double>(d - matches) / static_cast<double>(d);
  verdict.threshold = threshold;
  verdict.decision = decide(verdict.score, threshold);
  return verdict;
}

SimpleEngine::SimpleEngine(SimpleConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

std::string SimpleEngine::tag() const { return "simple-" + std::string(to_string(cfg_.variant)); }

RiskVerdict SimpleEngine::score(const HistoryView& view, const LoginEvent& event, double threshold) const {
  return score_simple(view, event, cfg_, threshold);
}

double SimpleEngine::risk(const HistoryView& view, const LoginEvent& event) const {
  return simple_risk(view, event, cfg_);
}

}  // namespace riskgate
