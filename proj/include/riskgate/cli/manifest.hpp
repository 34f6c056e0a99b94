#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace riskgate::cli {

inline constexpr std::string_view kVersion = "0.1.0";

std::string sha256_hex(std::string_view data);
// Throws Error(artifact_missing) when the file cannot be read.
std::string file_sha256(const std::filesystem::path& path);

struct ManifestFile {
  std::string path;  // relative to the output directory when inside it
  std::string sha256;
};

struct Manifest {
  std::string command;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config;
  std::vector<ManifestFile> inputs;
  std::vector<ManifestFile> outputs;

  std::string config_hash() const;
  nlohmann::ordered_json to_json() const;
};

// Records the file's hash under its path relative to `root` (if inside it).
ManifestFile describe_file(const std::filesystem::path& file, const std::filesystem::path& root);

// Writes <dir>/manifest-<command>.json and returns its path.
std::filesystem::path write_manifest(const std::filesystem::path& dir, const Manifest& manifest);

}  // namespace riskgate::cli
