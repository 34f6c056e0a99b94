#pragma once

#include <string_view>

#include "riskgate/core/history.hpp"
#include "riskgate/featurekit/catalog.hpp"

namespace riskgate {

// Two-level backoff smoothing: user -> global -> unseen-value bucket.
struct SmoothingConfig {
  double alpha_user = 1.0;
  double beta_global = 0.5;

  // Throws InvalidConfig unless both constants are finite and > 0.
  void validate() const;

  friend bool operator==(const SmoothingConfig&, const SmoothingConfig&) = default;
};

// (c_g + beta) / (N + beta * (V + 1)); 1.0 on an empty history.
double p_global(const HistoryView& view, std::string_view feature, const FeatureValue& value,
                const SmoothingConfig& cfg);

// (c_u + alpha * p_global) / (n_u + alpha): interpolates the user's MLE with
// weight n_u / (n_u + alpha) against p_global.
double p_user(const HistoryView& view, const UserId& user, std::string_view feature, const FeatureValue& value,
              const SmoothingConfig& cfg);

// p_user when given a user, p_global otherwise.
double p_scoped(const HistoryView& view, const UserId* user, std::string_view feature, const FeatureValue& value,
                const SmoothingConfig& cfg);

// Weighted mixture of the descriptor's subfeature probabilities for the
// event's values. Throws WeightSumInvalid.
double p_feature_weighted(const HistoryView& view, const UserId* user, const FeatureDescriptor& descriptor,
                          const LoginEvent& event, const SmoothingConfig& cfg);

// Both mixtures at once: {global, user}. Shares the global lookups.
struct FeatureProbabilities {
  double global = 1.0;
  double user = 1.0;
};
FeatureProbabilities feature_probabilities(const HistoryView& view, const UserId& user,
                                           const FeatureDescriptor& descriptor, const LoginEvent& event,
                                           const SmoothingConfig& cfg);

}  // namespace riskgate
