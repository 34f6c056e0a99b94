#include "riskgate/featurekit/ip_lookup.hpp"

#include <arpa/inet.h>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "riskgate/core/errors.hpp"

namespace riskgate {

namespace {

constexpr int kV4Offset = 96;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<IpAddress> IpAddress::parse(std::string_view text) {
  const std::string s(trim(text));
  std::array<unsigned char, 16> bytes{};
  if (inet_pton(AF_INET, s.c_str(), bytes.data()) == 1) {
    Uint128 bits = 0xffff;
    for (int i = 0; i < 4; ++i) bits = (bits << 8) | bytes[i];
    return IpAddress{bits};
  }
  if (inet_pton(AF_INET6, s.c_str(), bytes.data()) == 1) {
    Uint128 bits = 0;
    for (unsigned char b : bytes) bits = (bits << 8) | b;
    return IpAddress{bits};
  }
  return std::nullopt;
}

std::string IpAddress::to_string() const {
  std::array<unsigned char, 16> bytes{};
  Uint128 rest = bits;
  for (int i = 15; i >= 0; --i) {
    bytes[static_cast<std::size_t>(i)] = static_cast<unsigned char>(rest & 0xff);
    rest >>= 8;
  }
  char buffer[INET6_ADDRSTRLEN] = {};
  if ((bits >> 32) == 0xffff) {
    inet_ntop(AF_INET, bytes.data() + 12, buffer, sizeof(buffer));
  } else {
    inet_ntop(AF_INET6, bytes.data(), buffer, sizeof(buffer));
  }
  return buffer;
}

std::optional<IpPrefix> IpPrefix::parse(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  const auto address = IpAddress::parse(text.substr(0, slash));
  if (!address) return std::nullopt;
  const bool v4 = text.substr(0, slash).find(':') == std::string_view::npos;
  int length = v4 ? 32 : 128;
  if (slash != std::string_view::npos) {
    auto digits = text.substr(slash + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), length);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
    if (length < 0 || length > (v4 ? 32 : 128)) return std::nullopt;
  }
  if (v4) length += kV4Offset;
  IpPrefix prefix{*address, length};
  const Uint128 m = length == 0 ? 0 : (~static_cast<Uint128>(0)) << (128 - length);
  prefix.network.bits &= m;
  return prefix;
}

bool IpPrefix::contains(const IpAddress& address) const noexcept {
  const Uint128 m = length == 0 ? 0 : (~static_cast<Uint128>(0)) << (128 - length);
  return (address.bits & m) == network.bits;
}

std::string IpPrefix::to_string() const {
  std::array<unsigned char, 16> bytes{};
  Uint128 bits = network.bits;
  for (int i = 15; i >= 0; --i) {
    bytes[static_cast<std::size_t>(i)] = static_cast<unsigned char>(bits & 0xff);
    bits >>= 8;
  }
  char buffer[INET6_ADDRSTRLEN] = {};
  const bool v4 = (network.bits >> 32) == 0xffff && length >= kV4Offset;
  if (v4) {
    inet_ntop(AF_INET, bytes.data() + 12, buffer, sizeof(buffer));
    return std::string(buffer) + "/" + std::to_string(length - kV4Offset);
  }
  inet_ntop(AF_INET6, bytes.data(), buffer, sizeof(buffer));
  return std::string(buffer) + "/" + std::to_string(length);
}

Uint128 IpLookupTable::mask(int length) noexcept {
  return length == 0 ? 0 : (~static_cast<Uint128>(0)) << (128 - length);
}

void IpLookupTable::add(const IpPrefix& prefix, IpInfo info) {
  auto& bucket = by_length_[prefix.length];
  auto [it, inserted] = bucket.insert_or_assign(prefix.network.bits & mask(prefix.length), std::move(info));
  if (inserted) ++entries_;
}

std::optional<IpInfo> IpLookupTable::lookup(const IpAddress& address) const {
  for (const auto& [length, bucket] : by_length_) {
    auto it = bucket.find(address.bits & mask(length));
    if (it != bucket.end()) return it->second;
  }
  return std::nullopt;
}

std::optional<IpInfo> IpLookupTable::lookup(std::string_view address) const {
  auto parsed = IpAddress::parse(address);
  if (!parsed) return std::nullopt;
  return lookup(*parsed);
}

IpLookupTable IpLookupTable::read(std::istream& in) {
  IpLookupTable table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      fields.push_back(trim(view.substr(start, comma == std::string_view::npos ? view.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) throw Error(Errc::schema_mismatch, "lookup table needs 4 fields", number);
    auto prefix = IpPrefix::parse(fields[0]);
    if (!prefix) throw Error(Errc::schema_mismatch, "bad prefix '" + std::string(fields[0]) + "'", number);
    table.add(*prefix, IpInfo{std::string(fields[1]), std::string(fields[2]), std::string(fields[3])});
  }
  return table;
}

IpLookupTable IpLookupTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open lookup table " + path.string());
  return read(in);
}

}  // namespace riskgate
