#include "riskgate/core/errors.hpp"

namespace riskgate {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::out_of_order_timestamp: return "OutOfOrderTimestamp";
    case Errc::duplicate_event_id: return "DuplicateEventId";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::schema_mismatch: return "SchemaMismatch";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::unknown_derivation_rule: return "UnknownDerivationRule";
    case Errc::lookup_table_missing: return "LookupTableMissing";
    case Errc::weight_sum_invalid: return "WeightSumInvalid";
    case Errc::empty_feature_set: return "EmptyFeatureSet";
    case Errc::unknown_feature: return "UnknownFeature";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::no_pool_entry_for_country: return "NoPoolEntryForCountry";
    case Errc::empty_scores: return "EmptyScores";
    case Errc::empty_distribution: return "EmptyDistribution";
    case Errc::zero_legitimate_mean: return "ZeroLegitimateMean";
    case Errc::degenerate_groups: return "DegenerateGroups";
    case Errc::degenerate_x: return "DegenerateX";
    case Errc::insufficient_data: return "InsufficientData";
    case Errc::config_invalid: return "ConfigInvalid";
    case Errc::artifact_missing: return "ArtifactMissing";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string format_message(Errc code, const std::string& message) {
  std::string out(errc_name(code));
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(format_message(code, message)), code_(code) {}

Error::Error(Errc code, const std::string& message, std::size_t row)
    : std::runtime_error(format_message(code, message + " (row " + std::to_string(row) + ")")),
      code_(code),
      row_(row) {}

}  // namespace riskgate
