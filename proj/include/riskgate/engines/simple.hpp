#pragma once

#include <string>
#include <vector>

#include "riskgate/engines/verdict.hpp"

namespace riskgate {

// Pseudo-feature of the ALL variant: matches when the user's most recent
// legitimate login lies within the configured window before the event.
inline constexpr std::string_view kLastLoginFeature = "last_login";

enum class SimpleVariant { ipua, all, custom };

struct SimpleConfig {
  SimpleVariant variant = SimpleVariant::ipua;
  std::vector<std::string> features;
  int last_login_window_days = 31;

  // IP address, IP geolocation (country) and user agent string.
  static SimpleConfig ipua();
  // IPUA plus the registered client fingerprint and the last-login window.
  static SimpleConfig all();
  static SimpleConfig custom(std::vector<std::string> features);

  // Throws EmptyFeatureSet.
  void validate() const;
};

std::string_view to_string(SimpleVariant variant) noexcept;

// Exact-match scoring. A feature matches when the event's value occurs at
// least once in the user's legitimate history; MISSING never matches.
// score = 1 - matches / d. contributions holds 1/0 per feature plus
// "matchRatio".
RiskVerdict score_simple(const HistoryView& view, const LoginEvent& event, const SimpleConfig& cfg,
                         double threshold);
double simple_risk(const HistoryView& view, const LoginEvent& event, const SimpleConfig& cfg);

class SimpleEngine final : public RiskEngine {
 public:
  explicit SimpleEngine(SimpleConfig cfg);

  std::string tag() const override;
  RiskVerdict score(const HistoryView& view, const LoginEvent& event, double threshold) const override;
  double risk(const HistoryView& view, const LoginEvent& event) const override;

  const SimpleConfig& config() const noexcept { return cfg_; }

 private:
  SimpleConfig cfg_;
};

}  // namespace riskgate
