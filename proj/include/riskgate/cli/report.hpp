#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "riskgate/evalsuite/metrics.hpp"
#include "riskgate/evalsuite/qualify.hpp"

namespace riskgate::cli {

// Shortest text that reads back to the same double; "inf" / "-inf" / "nan".
std::string format_double(double value);
// Throws Error(schema_mismatch) on malformed text.
double parse_double(std::string_view text);

// One delimited row; fields with commas, quotes or newlines are quoted.
std::string csv_row(const std::vector<std::string>& fields);
// Splits one line written by csv_row.
std::vector<std::string> parse_csv_row(std::string_view line);

struct ReauthRow {
  std::string engine;
  std::string model;
  double target_tpr = 0.0;
  double achieved_tpr = 0.0;
  double threshold = 0.0;
  std::size_t history_size = 0;
  std::size_t users = 0;        // users with at least history_size logins
  double median_count = 0.0;
  double logins_until_reauth = 0.0;
  // Empty when no bucket qualifies or the largest valid one stays at or above
  // rate 0.5.
  std::optional<std::size_t> required_history_size;
};

std::vector<std::string> reauth_csv_header();
std::vector<std::string> reauth_csv_fields(const ReauthRow& row);

// Median logins until re-authentication per engine for one attacker model.
std::string render_reauth_table(const std::vector<ReauthRow>& rows, std::string_view model);

nlohmann::ordered_json feature_row_json(const FeatureBenchmarkRow& row);
FeatureBenchmarkRow feature_row_from_json(const nlohmann::json& j);

// Feature, script-free, RSR, H_global, mean H_user, unique values, median
// logins until re-authentication, category, then the test details.
std::vector<std::string> feature_csv_header();
std::vector<std::string> feature_csv_fields(const FeatureBenchmarkRow& row);

// The normalized RSR that decided the row's category: the add-on value for
// add-on categories, the single value otherwise.
double category_rsr(const FeatureBenchmarkRow& row);

// Human-readable feature tables (single and major add-on, then add-on, then
// rejected) with dot-scale unique values.
std::string render_feature_table(const std::vector<FeatureBenchmarkRow>& rows);

}  // namespace riskgate::cli
