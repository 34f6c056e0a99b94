#include "riskgate/featurekit/derive.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "riskgate/core/errors.hpp"
#include "riskgate/featurekit/user_agent.hpp"

namespace riskgate {

namespace {

constexpr Timestamp kSecondsPerDay = 86400;

// Sets `name` unless a pre-extracted value is already present.
void put(FeatureMap& out, std::string_view name, FeatureValue value) {
  auto it = out.find(name);
  if (it != out.end() && !it->second.is_missing()) return;
  out.insert_or_assign(std::string(name), std::move(value));
}

FeatureValue opt(const std::optional<std::string>& s) { return s ? FeatureValue(*s) : FeatureValue::missing(); }

bool present(const FeatureMap& map, std::string_view name) {
  auto it = map.find(name);
  return it != map.end() && !it->second.is_missing();
}

void derive_ip(FeatureMap& out, const IpLookupTable* lookup) {
  namespace c = columns;
  if (!lookup) {
    if (present(out, c::ip_asn) && present(out, c::ip_country) && present(out, c::ip_region)) return;
    throw Error(Errc::lookup_table_missing, "ip derivation requires a lookup table");
  }
  std::optional<IpInfo> info;
  if (auto it = out.find(c::ip); it != out.end() && !it->second.is_missing()) info = lookup->lookup(it->second.token());
  put(out, c::ip_asn, info ? FeatureValue(info->asn) : FeatureValue::missing());
  put(out, c::ip_country, info ? FeatureValue(info->country) : FeatureValue::missing());
  put(out, c::ip_region, info ? FeatureValue(info->region) : FeatureValue::missing());
}

void derive_ua(FeatureMap& out) {
  namespace c = columns;
  auto it = out.find(c::ua);
  if (it == out.end() || it->second.is_missing()) {
    put(out, c::ua_browser, FeatureValue::missing());
    put(out, c::ua_os, FeatureValue::missing());
    put(out, c::ua_device, FeatureValue::missing());
    return;
  }
  const UserAgentInfo info = parse_user_agent(it->second.token());
  put(out, c::ua_browser, opt(info.browser));
  put(out, c::ua_os, opt(info.os));
  put(out, c::ua_device, FeatureValue(info.device_type));
}

void derive_timestamp(FeatureMap& out, Timestamp ts) {
  namespace c = columns;
  const TimeParts parts = time_parts(ts);
  put(out, c::hour, FeatureValue(std::to_string(parts.hour)));
  put(out, c::weekday, FeatureValue(std::to_string(parts.weekday)));
  put(out, c::weekday_hour, FeatureValue(std::to_string(parts.weekday_hour())));
}

void derive_rtt(FeatureMap& out) {
  namespace c = columns;
  std::optional<std::vector<double>> measurements;
  if (auto it = out.find(c::rtt); it != out.end() && !it->second.is_missing()) {
    measurements = parse_rtt_measurements(it->second.token());
  }
  if (!measurements || measurements->empty()) {
    for (auto name : {c::rtt_raw, c::rtt_ms, c::rtt_5ms, c::rtt_10ms}) put(out, name, FeatureValue::missing());
    return;
  }
  const RttBuckets b = rtt_buckets(*measurements);
  char raw[32];
  std::snprintf(raw, sizeof(raw), "%.3f", b.raw_ms);
  put(out, c::rtt_raw, FeatureValue(raw));
  put(out, c::rtt_ms, FeatureValue(std::to_string(b.ms)));
  put(out, c::rtt_5ms, FeatureValue(std::to_string(b.ms5)));
  put(out, c::rtt_10ms, FeatureValue(std::to_string(b.ms10)));
}

}  // namespace

TimeParts time_parts(Timestamp ts) noexcept {
  Timestamp days = ts / kSecondsPerDay;
  Timestamp secs = ts % kSecondsPerDay;
  if (secs < 0) {
    secs += kSecondsPerDay;
    --days;
  }
  // 1970-01-01 was a Thursday (weekday 3 with Monday = 0).
  Timestamp weekday = (days + 3) % 7;
  if (weekday < 0) weekday += 7;
  return TimeParts{static_cast<int>(secs / 3600), static_cast<int>(weekday)};
}

RttBuckets rtt_buckets(std::span<const double> measurements_ms) {
  if (measurements_ms.empty()) throw Error(Errc::invalid_argument, "no RTT measurements");
  const double min = *std::min_element(measurements_ms.begin(), measurements_ms.end());
  RttBuckets b;
  b.raw_ms = min;
  b.ms = std::lround(min);
  b.ms5 = std::lround(min / 5.0) * 5;
  b.ms10 = std::lround(min / 10.0) * 10;
  return b;
}

std::optional<std::vector<double>> parse_rtt_measurements(std::string_view text) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '[' || c == ']' || c == ',' || c == ';' || c == ' ' || c == '\t') {
      ++i;
      continue;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc() || !std::isfinite(value) || value < 0.0) return std::nullopt;
    out.push_back(value);
    i = static_cast<std::size_t>(ptr - text.data());
  }
  if (out.empty()) return std::nullopt;
  return out;
}

std::string format_rtt_measurements(std::span<const double> measurements_ms) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < measurements_ms.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.3f", measurements_ms[i]);
    if (i) out.push_back(',');
    out += buf;
  }
  return out;
}

FeatureMap derive_subfeatures(const LoginEvent& event, const FeatureCatalog& catalog, const IpLookupTable* lookup) {
  FeatureMap out = event.features;
  for (const auto& rule : catalog.derivations()) {
    if (rule == rules::ip) {
      derive_ip(out, lookup);
    } else if (rule == rules::user_agent) {
      derive_ua(out);
    } else if (rule == rules::timestamp) {
      derive_timestamp(out, event.timestamp);
    } else if (rule == rules::rtt) {
      derive_rtt(out);
    } else {
      throw Error(Errc::unknown_derivation_rule, "'" + rule + "'");
    }
  }
  return out;
}

void enrich(LoginEvent& event, const FeatureCatalog& catalog, const IpLookupTable* lookup) {
  event.features = derive_subfeatures(event, catalog, lookup);
}

std::vector<std::string> derived_columns(const FeatureCatalog& catalog) {
  namespace c = columns;
  std::vector<std::string> out;
  for (const auto& rule : catalog.derivations()) {
    std::vector<std::string_view> cols;
    if (rule == rules::ip) cols = {c::ip_asn, c::ip_country, c::ip_region};
    if (rule == rules::user_agent) cols = {c::ua_browser, c::ua_os, c::ua_device};
    if (rule == rules::timestamp) cols = {c::hour, c::weekday, c::weekday_hour};
    if (rule == rules::rtt) cols = {c::rtt_raw, c::rtt_ms, c::rtt_5ms, c::rtt_10ms};
    for (auto col : cols) out.emplace_back(col);
  }
  return out;
}

}  // namespace riskgate
