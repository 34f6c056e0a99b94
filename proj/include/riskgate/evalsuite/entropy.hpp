#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "riskgate/core/history.hpp"

namespace riskgate {

// -sum p log2 p over the empirical distribution; zero counts are ignored.
// Throws EmptyDistribution when the counts sum to 0.
double shannon_entropy(std::span<const std::size_t> counts);

struct EntropyPair {
  double global = 0.0;
  double user_mean = 0.0;  // mean over users of their own history's entropy
};

// MISSING counts as one more category. Throws EmptyDistribution on an empty
// view.
EntropyPair entropy_pair(const HistoryView& view, std::string_view column);

struct UniqueCounts {
  std::size_t global = 0;
  std::optional<std::size_t> desktop;  // nullopt when no login has a device class
  std::optional<std::size_t> mobile;
};

// Distinct non-MISSING values over the view's legitimate logins, overall and
// split by the device-class column.
UniqueCounts unique_value_counts(const HistoryView& view, std::string_view column,
                                 std::string_view device_column = "ua_device");

// Filled dots of five: 10-24 -> 1, 25-74 -> 2, 75-149 -> 3, 150-300 -> 4,
// more than 300 -> 5; below 10 -> 0.
int dot_scale(std::size_t unique_values) noexcept;
std::string render_dots(std::size_t unique_values);

}  // namespace riskgate
