#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskgate/core/types.hpp"
#include "riskgate/featurekit/catalog.hpp"
#include "riskgate/featurekit/ip_lookup.hpp"

namespace riskgate {

struct TimeParts {
  int hour = 0;     // 0-23, UTC
  int weekday = 0;  // 0 = Monday
  int weekday_hour() const noexcept { return weekday * 100 + hour; }
};
TimeParts time_parts(Timestamp ts) noexcept;

struct RttBuckets {
  double raw_ms = 0.0;  // smallest measurement
  long ms = 0;
  long ms5 = 0;
  long ms10 = 0;
};
// Minimum of the measurements, rounded half away from zero to 1/5/10 ms.
RttBuckets rtt_buckets(std::span<const double> measurements_ms);
// Parses "22.551,36.875,31.619" (brackets, spaces and semicolons tolerated).
std::optional<std::vector<double>> parse_rtt_measurements(std::string_view text);
std::string format_rtt_measurements(std::span<const double> measurements_ms);

// Returns the event's feature map extended with every column the catalog's
// derivation rules produce. Columns already present with a non-MISSING value
// are kept (pre-extracted columns take precedence). Underivable values are
// MISSING.
//
// Throws UnknownDerivationRule, or LookupTableMissing when the ip rule needs
// a table and none is given.
FeatureMap derive_subfeatures(const LoginEvent& event, const FeatureCatalog& catalog, const IpLookupTable* lookup);

// derive_subfeatures() applied in place.
void enrich(LoginEvent& event, const FeatureCatalog& catalog, const IpLookupTable* lookup);

// Columns the catalog's derivation rules add, in rule order.
std::vector<std::string> derived_columns(const FeatureCatalog& catalog);

}  // namespace riskgate
