#include "riskgate/core/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "riskgate/core/errors.hpp"

namespace riskgate {

namespace {

using ordered_json = nlohmann::ordered_json;
constexpr std::string_view kFeaturePrefix = "f.";

DatasetMeta parse_header(const std::string& line) {
  ordered_json header;
  try {
    header = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::schema_mismatch, std::string("header is not valid JSON: ") + e.what(), 0);
  }
  if (!header.is_object()) throw Error(Errc::schema_mismatch, "header must be an object", 0);

  DatasetMeta meta;
  try {
    meta.schema_version = header.at("schemaVersion").get<int>();
    meta.feature_names = header.at("featureNames").get<std::vector<std::string>>();
    meta.user_count = header.at("userCount").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::schema_mismatch, std::string("malformed header: ") + e.what(), 0);
  }
  if (meta.schema_version != kDatasetSchemaVersion) {
    throw Error(Errc::schema_mismatch, "unsupported schema version " + std::to_string(meta.schema_version), 0);
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : meta.feature_names) {
    if (name.empty() || !seen.insert(name).second) {
      throw Error(Errc::schema_mismatch, "duplicate or empty feature name '" + name + "'", 0);
    }
  }
  return meta;
}

LoginEvent parse_row(const std::string& line, const DatasetMeta& meta,
                     const std::unordered_set<std::string>& declared, std::size_t row) {
  ordered_json obj;
  try {
    obj = ordered_json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::schema_mismatch, "row is not valid JSON", row);
  }
  if (!obj.is_object()) throw Error(Errc::schema_mismatch, "row must be an object", row);

  auto user_it = obj.find("user");
  if (user_it == obj.end() || !user_it->is_string() || user_it->get<std::string>().empty()) {
    throw Error(Errc::schema_mismatch, "missing or malformed 'user'", row);
  }
  auto ts_it = obj.find("ts");
  if (ts_it == obj.end() || !ts_it->is_number_integer() || ts_it->get<std::int64_t>() <= 0) {
    throw Error(Errc::schema_mismatch, "missing or malformed 'ts'", row);
  }
  auto label_it = obj.find("label");
  if (label_it == obj.end() || !label_it->is_string()) {
    throw Error(Errc::schema_mismatch, "missing or malformed 'label'", row);
  }

  LoginEvent event{std::nullopt, UserId(user_it->get<std::string>()), ts_it->get<std::int64_t>(), {}, {}};
  try {
    event.label = parse_label(label_it->get<std::string>());
  } catch (const Error&) {
    throw Error(Errc::schema_mismatch, "unknown label", row);
  }
  if (auto id_it = obj.find("id"); id_it != obj.end()) {
    if (!id_it->is_string()) throw Error(Errc::schema_mismatch, "malformed 'id'", row);
    event.id = id_it->get<std::string>();
  }

  for (const auto& [key, value] : obj.items()) {
    if (key == "user" || key == "ts" || key == "label" || key == "id") continue;
    if (key.rfind(kFeaturePrefix, 0) != 0) {
      throw Error(Errc::schema_mismatch, "unknown field '" + key + "'", row);
    }
    std::string name = key.substr(kFeaturePrefix.size());
    if (!declared.contains(name)) {
      throw Error(Errc::schema_mismatch, "undeclared feature '" + name + "'", row);
    }
    if (value.is_null()) continue;
    if (!value.is_string()) throw Error(Errc::schema_mismatch, "feature '" + name + "' must be a string", row);
    event.features.emplace(std::move(name), FeatureValue(value.get<std::string>()));
  }
  for (const auto& name : meta.feature_names) event.features.try_emplace(name, FeatureValue::missing());
  return event;
}

}  // namespace

DatasetMeta describe(const std::vector<LoginEvent>& events) {
  DatasetMeta meta;
  std::unordered_set<std::string> seen_features;
  std::set<std::string> users;
  for (const auto& event : events) {
    users.insert(event.user.str());
    for (const auto& [name, value] : event.features) {
      if (seen_features.insert(name).second) meta.feature_names.push_back(name);
    }
  }
  meta.user_count = users.size();
  return meta;
}

Dataset read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw Error(Errc::empty_dataset, "no header line");

  Dataset dataset;
  dataset.meta = parse_header(line);
  const std::unordered_set<std::string> declared(dataset.meta.feature_names.begin(), dataset.meta.feature_names.end());

  std::size_t row = 0;
  std::set<std::string> users;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    dataset.events.push_back(parse_row(line, dataset.meta, declared, row));
    users.insert(dataset.events.back().user.str());
  }
  if (dataset.events.empty()) throw Error(Errc::empty_dataset, "dataset has no rows");
  if (users.size() != dataset.meta.user_count) {
    throw Error(Errc::schema_mismatch,
                "header declares " + std::to_string(dataset.meta.user_count) + " users, rows contain " +
                    std::to_string(users.size()),
                0);
  }
  return dataset;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open dataset " + path.string());
  return read_dataset(in);
}

std::string format_row(const LoginEvent& event, const std::vector<std::string>& feature_names) {
  ordered_json obj;
  if (event.id) obj["id"] = *event.id;
  obj["user"] = event.user.str();
  obj["ts"] = event.timestamp;
  obj["label"] = to_string(event.label);
  for (const auto& name : feature_names) {
    const FeatureValue& value = event.value(name);
    std::string key = std::string(kFeaturePrefix) + name;
    if (value.is_missing()) {
      obj[key] = nullptr;
    } else {
      obj[key] = value.token();
    }
  }
  return obj.dump();
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  ordered_json header;
  header["schemaVersion"] = dataset.meta.schema_version;
  header["featureNames"] = dataset.meta.feature_names;
  header["userCount"] = dataset.meta.user_count;
  out << header.dump() << '\n';
  for (const auto& event : dataset.events) out << format_row(event, dataset.meta.feature_names) << '\n';
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write dataset " + path.string());
  write_dataset(out, dataset);
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

}  // namespace riskgate
