#include "riskgate/featurekit/probability.hpp"

#include <cmath>

#include "riskgate/core/errors.hpp"

namespace riskgate {

void SmoothingConfig::validate() const {
  if (!(std::isfinite(alpha_user) && alpha_user > 0.0)) {
    throw Error(Errc::invalid_config, "alphaUser must be > 0");
  }
  if (!(std::isfinite(beta_global) && beta_global > 0.0)) {
    throw Error(Errc::invalid_config, "betaGlobal must be > 0");
  }
}

double p_global(const HistoryView& view, std::string_view feature, const FeatureValue& value,
                const SmoothingConfig& cfg) {
  const double count = static_cast<double>(view.global_count(feature, value));
  const double total = static_cast<double>(view.total_logins());
  const double distinct = static_cast<double>(view.distinct_values(feature));
  return (count + cfg.beta_global) / (total + cfg.beta_global * (distinct + 1.0));
}

namespace {

double p_user_given_global(const HistoryView& view, const UserId& user, std::string_view feature,
                           const FeatureValue& value, double global, double user_logins, const SmoothingConfig& cfg) {
  const double count = static_cast<double>(view.user_value_count(user, feature, value));
  return (count + cfg.alpha_user * global) / (user_logins + cfg.alpha_user);
}

}  // namespace

double p_user(const HistoryView& view, const UserId& user, std::string_view feature, const FeatureValue& value,
              const SmoothingConfig& cfg) {
  const double global = p_global(view, feature, value, cfg);
  return p_user_given_global(view, user, feature, value, global, static_cast<double>(view.user_logins(user)), cfg);
}

double p_scoped(const HistoryView& view, const UserId* user, std::string_view feature, const FeatureValue& value,
                const SmoothingConfig& cfg) {
  return user ? p_user(view, *user, feature, value, cfg) : p_global(view, feature, value, cfg);
}

double p_feature_weighted(const HistoryView& view, const UserId* user, const FeatureDescriptor& descriptor,
                          const LoginEvent& event, const SmoothingConfig& cfg) {
  descriptor.validate();
  double p = 0.0;
  for (const auto& sub : descriptor.components()) {
    p += sub.weight * p_scoped(view, user, sub.source, event.value(sub.source), cfg);
  }
  return p;
}

FeatureProbabilities feature_probabilities(const HistoryView& view, const UserId& user,
                                           const FeatureDescriptor& descriptor, const LoginEvent& event,
                                           const SmoothingConfig& cfg) {
  const double user_logins = static_cast<double>(view.user_logins(user));
  FeatureProbabilities out{0.0, 0.0};
  for (const auto& sub : descriptor.components()) {
    const FeatureValue& value = event.value(sub.source);
    const double global = p_global(view, sub.source, value, cfg);
    out.global += sub.weight * global;
    out.user += sub.weight * p_user_given_global(view, user, sub.source, value, global, user_logins, cfg);
  }
  return out;
}

}  // namespace riskgate
