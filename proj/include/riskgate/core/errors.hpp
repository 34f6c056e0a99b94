#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace riskgate {

enum class Errc {
  invalid_argument,
  out_of_order_timestamp,
  duplicate_event_id,
  index_out_of_range,
  schema_mismatch,
  empty_dataset,
  unknown_derivation_rule,
  lookup_table_missing,
  weight_sum_invalid,
  empty_feature_set,
  unknown_feature,
  invalid_config,
  no_pool_entry_for_country,
  empty_scores,
  empty_distribution,
  zero_legitimate_mean,
  degenerate_groups,
  degenerate_x,
  insufficient_data,
  config_invalid,
  artifact_missing,
  io_error,
};

std::string_view errc_name(Errc code) noexcept;

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Error(Errc code, const std::string& message, std::size_t row);

  Errc code() const noexcept { return code_; }
  // Data row (1-based, header excluded) for dataset schema errors.
  std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  Errc code_;
  std::optional<std::size_t> row_;
};

}  // namespace riskgate
