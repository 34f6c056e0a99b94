#pragma once

#include <string>
#include <vector>

#include "riskgate/engines/verdict.hpp"
#include "riskgate/featurekit/catalog.hpp"
#include "riskgate/featurekit/probability.hpp"

namespace riskgate {

struct ExtendConfig {
  // Descriptor names; repeats are allowed and each occurrence multiplies in.
  std::vector<std::string> features;
  SmoothingConfig smoothing;

  // IP address and user agent string, both with subfeatures.
  static ExtendConfig baseline();

  // Throws EmptyFeatureSet, UnknownFeature or InvalidConfig.
  void validate(const FeatureCatalog& catalog) const;
};

// Likelihood-ratio score
//   S = prod_k p(x_k) / p(x_k | u, legit) * p(u | attack) / p(u | legit)
// with p(u | attack) = 1/|U| and p(u | legit) = (n_u + 1) / (N + |U|).
// contributions holds each feature's ratio and the "userPrior" term.
RiskVerdict score_extend(const HistoryView& view, const LoginEvent& event, const FeatureCatalog& catalog,
                         const ExtendConfig& cfg, double threshold);

// The user prior term p(u | attack) / p(u | legit).
double extend_user_prior(const HistoryView& view, const UserId& user);

class ExtendEngine final : public RiskEngine {
 public:
  ExtendEngine(FeatureCatalog catalog, ExtendConfig cfg);
  // resolved_ points into catalog_; map nodes survive a move but not a copy.
  ExtendEngine(const ExtendEngine&) = delete;
  ExtendEngine& operator=(const ExtendEngine&) = delete;
  ExtendEngine(ExtendEngine&&) noexcept = default;
  ExtendEngine& operator=(ExtendEngine&&) noexcept = default;

  std::string tag() const override { return "extend"; }
  RiskVerdict score(const HistoryView& view, const LoginEvent& event, double threshold) const override;
  double risk(const HistoryView& view, const LoginEvent& event) const override;

  const ExtendConfig& config() const noexcept { return cfg_; }
  const FeatureCatalog& catalog() const noexcept { return catalog_; }

 private:
  FeatureCatalog catalog_;
  ExtendConfig cfg_;
  std::vector<const FeatureDescriptor*> resolved_;
};

}  // namespace riskgate
