#include "riskgate/featurekit/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "riskgate/core/errors.hpp"

namespace riskgate {

std::vector<Subfeature> FeatureDescriptor::components() const {
  if (subfeatures.empty()) return {Subfeature{name, 1.0}};
  return subfeatures;
}

const std::string& FeatureDescriptor::primary_column() const {
  return subfeatures.empty() ? name : subfeatures.front().source;
}

void FeatureDescriptor::validate() const {
  if (subfeatures.empty()) return;
  double sum = 0.0;
  for (const auto& sub : subfeatures) {
    if (!(sub.weight >= 0.0 && sub.weight <= 1.0)) {
      throw Error(Errc::weight_sum_invalid, "weight of '" + sub.source + "' in '" + name + "' outside [0,1]");
    }
    sum += sub.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(Errc::weight_sum_invalid, "weights of '" + name + "' sum to " + std::to_string(sum));
  }
}

namespace {

FeatureDescriptor raw(std::string_view name, ReliabilityLabels labels, std::vector<Subfeature> subs = {}) {
  return FeatureDescriptor{std::string(name), FeatureKind::raw, std::nullopt, std::move(subs), labels};
}

FeatureDescriptor derived(std::string_view name, std::string_view rule, ReliabilityLabels labels) {
  return FeatureDescriptor{std::string(name), FeatureKind::derived, std::string(rule), {}, labels};
}

}  // namespace

FeatureCatalog FeatureCatalog::builtin() {
  namespace c = columns;
  constexpr ReliabilityLabels server{true, true};
  constexpr ReliabilityLabels server_js{true, false};  // WebSocket probing needs a script
  constexpr ReliabilityLabels header{false, true};
  constexpr ReliabilityLabels script{false, false};

  FeatureCatalog catalog;
  catalog.add(raw(c::ip, server,
                  {{std::string(c::ip), 0.6}, {std::string(c::ip_asn), 0.3}, {std::string(c::ip_country), 0.1}}));
  catalog.add(derived(c::ip_asn, rules::ip, server));
  catalog.add(derived(c::ip_country, rules::ip, server));
  catalog.add(derived(c::ip_region, rules::ip, server));

  catalog.add(raw(c::ua, header,
                  {{std::string(c::ua), 0.53},
                   {std::string(c::ua_browser), 0.27},
                   {std::string(c::ua_os), 0.19},
                   {std::string(c::ua_device), 0.01}}));
  catalog.add(raw("ua_plain", header, {{std::string(c::ua), 1.0}}));
  catalog.add(derived(c::ua_browser, rules::user_agent, header));
  catalog.add(derived(c::ua_os, rules::user_agent, header));
  catalog.add(derived(c::ua_device, rules::user_agent, header));

  catalog.add(derived(c::hour, rules::timestamp, server));
  catalog.add(derived(c::weekday, rules::timestamp, server));
  catalog.add(derived(c::weekday_hour, rules::timestamp, server));

  catalog.add(derived(c::rtt_raw, rules::rtt, server_js));
  catalog.add(derived(c::rtt_ms, rules::rtt, server_js));
  catalog.add(derived(c::rtt_5ms, rules::rtt, server_js));
  catalog.add(derived(c::rtt_10ms, rules::rtt, server_js));

  catalog.add(raw(c::cookie, header));
  catalog.add(raw(c::fingerprint, script));
  catalog.add(raw(c::screen, script));
  catalog.add(raw(c::language, header));

  catalog.derivations_ = {std::string(rules::ip), std::string(rules::user_agent), std::string(rules::timestamp),
                          std::string(rules::rtt)};
  return catalog;
}

void FeatureCatalog::add(FeatureDescriptor descriptor) {
  descriptor.validate();
  std::string key = descriptor.name;
  descriptors_.insert_or_assign(std::move(key), std::move(descriptor));
}

void FeatureCatalog::add_passthrough(const std::vector<std::string>& cols) {
  const auto inputs = raw_inputs();
  for (const auto& col : cols) {
    if (contains(col)) continue;
    if (std::find(inputs.begin(), inputs.end(), col) != inputs.end()) continue;
    add(FeatureDescriptor{col, FeatureKind::raw, std::nullopt, {}, {}});
  }
}

void FeatureCatalog::set_subfeatures(std::string_view name, std::vector<Subfeature> subfeatures) {
  auto it = descriptors_.find(name);
  if (it == descriptors_.end()) throw Error(Errc::unknown_feature, std::string(name));
  FeatureDescriptor updated = it->second;
  updated.subfeatures = std::move(subfeatures);
  updated.validate();
  it->second = std::move(updated);
}

bool FeatureCatalog::contains(std::string_view name) const { return descriptors_.find(name) != descriptors_.end(); }

const FeatureDescriptor& FeatureCatalog::at(std::string_view name) const {
  auto it = descriptors_.find(name);
  if (it == descriptors_.end()) throw Error(Errc::unknown_feature, "'" + std::string(name) + "' is not in the catalog");
  return it->second;
}

std::vector<std::string> FeatureCatalog::names() const {
  std::vector<std::string> out;
  out.reserve(descriptors_.size());
  for (const auto& [name, descriptor] : descriptors_) out.push_back(name);
  return out;
}

std::vector<std::string> FeatureCatalog::raw_inputs() const {
  std::vector<std::string> out;
  for (const auto& rule : derivations_) {
    if (rule == rules::ip) out.emplace_back(columns::ip);
    if (rule == rules::user_agent) out.emplace_back(columns::ua);
    if (rule == rules::rtt) out.emplace_back(columns::rtt);
  }
  return out;
}

}  // namespace riskgate
