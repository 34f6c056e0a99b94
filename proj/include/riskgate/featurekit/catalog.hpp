#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace riskgate {

enum class FeatureKind { raw, derived };

// Derivation rule ids understood by derive_subfeatures().
namespace rules {
inline constexpr std::string_view ip = "ip";
inline constexpr std::string_view user_agent = "ua";
inline constexpr std::string_view timestamp = "timestamp";
inline constexpr std::string_view rtt = "rtt";
}  // namespace rules

// Column names produced or consumed by the built-in catalog.
namespace columns {
inline constexpr std::string_view ip = "ip";
inline constexpr std::string_view ip_asn = "ip_asn";
inline constexpr std::string_view ip_country = "ip_country";
inline constexpr std::string_view ip_region = "ip_region";
inline constexpr std::string_view ua = "ua";
inline constexpr std::string_view ua_browser = "ua_browser";
inline constexpr std::string_view ua_os = "ua_os";
inline constexpr std::string_view ua_device = "ua_device";
inline constexpr std::string_view hour = "ts_hour";
inline constexpr std::string_view weekday = "ts_weekday";
inline constexpr std::string_view weekday_hour = "ts_weekday_hour";
inline constexpr std::string_view rtt = "rtt";
inline constexpr std::string_view rtt_raw = "rtt_raw";
inline constexpr std::string_view rtt_ms = "rtt_ms";
inline constexpr std::string_view rtt_5ms = "rtt_5ms";
inline constexpr std::string_view rtt_10ms = "rtt_10ms";
inline constexpr std::string_view cookie = "cookie";
inline constexpr std::string_view fingerprint = "fp";
inline constexpr std::string_view screen = "screen";
inline constexpr std::string_view language = "lang";
}  // namespace columns

struct Subfeature {
  std::string source;  // column in the enriched feature map
  double weight = 1.0;

  friend bool operator==(const Subfeature&, const Subfeature&) = default;
};

struct ReliabilityLabels {
  bool server_side = false;
  bool script_free = false;

  friend bool operator==(const ReliabilityLabels&, const ReliabilityLabels&) = default;
};

struct FeatureDescriptor {
  std::string name;
  FeatureKind kind = FeatureKind::raw;
  std::optional<std::string> derivation;
  // Empty means the descriptor scores its own column with weight 1.
  std::vector<Subfeature> subfeatures;
  ReliabilityLabels labels;

  // The weighted columns this descriptor scores on.
  std::vector<Subfeature> components() const;
  // Column used for value statistics (entropy, unique counts).
  const std::string& primary_column() const;
  // Throws WeightSumInvalid unless weights lie in [0,1] and sum to 1 within 1e-9.
  void validate() const;

  friend bool operator==(const FeatureDescriptor&, const FeatureDescriptor&) = default;
};

class FeatureCatalog {
 public:
  FeatureCatalog() = default;

  // The default feature set: IP (0.6/0.3/0.1 over ip/asn/country), user agent
  // (0.53/0.27/0.19/0.01 over string/browser/os/device), timestamp, RTT,
  // cookie, fingerprint, screen and language features.
  static FeatureCatalog builtin();

  void add(FeatureDescriptor descriptor);
  // Adds raw, unlabeled descriptors for columns the catalog does not know.
  void add_passthrough(const std::vector<std::string>& columns);
  // Replaces the subfeature weights of an existing descriptor.
  void set_subfeatures(std::string_view name, std::vector<Subfeature> subfeatures);

  bool contains(std::string_view name) const;
  // Throws UnknownFeature.
  const FeatureDescriptor& at(std::string_view name) const;
  std::vector<std::string> names() const;  // sorted
  const std::map<std::string, FeatureDescriptor, std::less<>>& descriptors() const noexcept { return descriptors_; }

  // Derivation rules derive_subfeatures() has to run for this catalog.
  const std::vector<std::string>& derivations() const noexcept { return derivations_; }
  void set_derivations(std::vector<std::string> rules) { derivations_ = std::move(rules); }

  // Raw input columns consumed by the derivation rules.
  std::vector<std::string> raw_inputs() const;

 private:
  std::map<std::string, FeatureDescriptor, std::less<>> descriptors_;
  std::vector<std::string> derivations_;
};

}  // namespace riskgate
