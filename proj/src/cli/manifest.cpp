#include "riskgate/cli/manifest.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "riskgate/core/dataset.hpp"
#include "riskgate/core/errors.hpp"

namespace riskgate::cli {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error(Errc::io_error, "SHA-256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string file_sha256(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::artifact_missing, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::string Manifest::config_hash() const { return sha256_hex(config.dump()); }

nlohmann::ordered_json Manifest::to_json() const {
  const auto files = [](const std::vector<ManifestFile>& list) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : list) arr.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return arr;
  };
  nlohmann::ordered_json j;
  j["command"] = command;
  j["configHash"] = config_hash();
  j["seed"] = seed;
  j["versions"] = {{"riskgate", std::string(kVersion)}, {"datasetSchema", kDatasetSchemaVersion}};
  j["inputs"] = files(inputs);
  j["outputs"] = files(outputs);
  j["config"] = config;
  return j;
}

ManifestFile describe_file(const fs::path& file, const fs::path& root) {
  std::string shown = file.generic_string();
  std::error_code ec;
  const fs::path rel = fs::relative(file, root, ec);
  if (!ec && !rel.empty() && *rel.begin() != "..") shown = rel.generic_string();
  return {shown, file_sha256(file)};
}

fs::path write_manifest(const fs::path& dir, const Manifest& manifest) {
  const fs::path path = dir / ("manifest-" + manifest.command + ".json");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << manifest.to_json().dump(2) << '\n';
  if (!out) throw Error(Errc::io_error, "writing " + path.string() + " failed");
  return path;
}

}  // namespace riskgate::cli
