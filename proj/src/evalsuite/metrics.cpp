#include "riskgate/evalsuite/metrics.hpp"

#include <algorithm>
#include <limits>

#include "riskgate/core/errors.hpp"

namespace riskgate {

double median(std::vector<double> values) {
  if (values.empty()) throw Error(Errc::invalid_argument, "median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

double logins_until_reauth(std::size_t history_size, double median_reauth_count) {
  if (history_size == 0) throw Error(Errc::invalid_argument, "history size must be at least 1");
  if (median_reauth_count < 0.0) throw Error(Errc::invalid_argument, "re-authentication count is negative");
  if (median_reauth_count == 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(history_size) / median_reauth_count;
}

std::optional<std::size_t> required_history_size(const std::vector<SizeAggregate>& aggregates,
                                                  std::size_t min_users) {
  std::optional<std::size_t> max_valid;
  std::size_t last_high = 0;
  for (const auto& a : aggregates) {
    if (a.users < min_users) continue;
    if (!max_valid || a.size > *max_valid) max_valid = a.size;
  }
  if (!max_valid) return std::nullopt;
  for (const auto& a : aggregates) {
    if (a.users < min_users) continue;
    if (a.median_rate >= 0.5) last_high = std::max(last_high, a.size);
  }
  if (last_high == *max_valid) return std::nullopt;
  return last_high;
}

}  // namespace riskgate
