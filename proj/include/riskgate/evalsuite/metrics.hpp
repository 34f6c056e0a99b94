#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace riskgate {

struct SizeAggregate {
  std::size_t size = 0;   // login history size s
  std::size_t users = 0;  // users with at least s logins
  double median_count = 0.0;  // re-authentications within the first s logins
  double median_rate = 0.0;   // median of count / s
};

// Median of the values (mean of the middle pair for even sizes). Throws
// InvalidArgument when empty.
double median(std::vector<double> values);

// size / median count, infinity when the median count is 0. Throws
// InvalidArgument for size 0 or a negative count.
double logins_until_reauth(std::size_t history_size, double median_reauth_count);

// Smallest s such that every bucket with s < s' <= the largest valid size
// has a median rate below 0.5. Buckets with fewer than min_users users are
// ignored. nullopt when no valid bucket exists or the largest valid bucket
// itself has rate >= 0.5.
std::optional<std::size_t> required_history_size(const std::vector<SizeAggregate>& aggregates,
                                                  std::size_t min_users = 30);

}  // namespace riskgate
