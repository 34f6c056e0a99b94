#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "riskgate/core/types.hpp"

namespace riskgate {

inline constexpr int kDatasetSchemaVersion = 1;

struct DatasetMeta {
  std::vector<std::string> feature_names;  // raw feature columns, no duplicates
  std::size_t user_count = 0;
  int schema_version = kDatasetSchemaVersion;

  friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

struct Dataset {
  DatasetMeta meta;
  std::vector<LoginEvent> events;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Builds meta for a sequence of events: the union of feature names in order
// of first appearance and the number of distinct users.
DatasetMeta describe(const std::vector<LoginEvent>& events);

// Line-delimited JSON. Line 1 is the header
//   {"schemaVersion":1,"featureNames":[...],"userCount":N}
// and every following line is one login
//   {"user":"u1","ts":1539641855,"label":"legitimate","f.ip":"10.0.0.1",...}
// with an optional "id". A null or absent declared feature reads as MISSING.
//
// Errors: SchemaMismatch (with the 1-based data row), EmptyDataset.
Dataset read_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);

void write_dataset(std::ostream& out, const Dataset& dataset);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

// Serializes one login as a dataset row (no trailing newline).
std::string format_row(const LoginEvent& event, const std::vector<std::string>& feature_names);

}  // namespace riskgate
