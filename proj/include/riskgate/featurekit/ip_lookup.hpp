#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace riskgate {

__extension__ typedef unsigned __int128 Uint128;

struct IpInfo {
  std::string asn;
  std::string country;
  std::string region;

  friend bool operator==(const IpInfo&, const IpInfo&) = default;
};

// IPv4 or IPv6 address as a 128-bit integer; IPv4 is mapped into
// ::ffff:0:0/96.
struct IpAddress {
  Uint128 bits = 0;

  static std::optional<IpAddress> parse(std::string_view text);
  // Dotted quad for mapped IPv4, RFC 5952 text otherwise.
  std::string to_string() const;
  friend bool operator==(const IpAddress&, const IpAddress&) = default;
};

struct IpPrefix {
  IpAddress network;
  int length = 0;  // in the 128-bit space

  // "a.b.c.d/n", "x::/n", or a bare address (host prefix).
  static std::optional<IpPrefix> parse(std::string_view text);
  bool contains(const IpAddress& address) const noexcept;
  std::string to_string() const;
};

// Longest-prefix-match table loaded from delimited text:
//   # comment
//   cidr-prefix, asn, country, region
class IpLookupTable {
 public:
  void add(const IpPrefix& prefix, IpInfo info);
  std::optional<IpInfo> lookup(const IpAddress& address) const;
  std::optional<IpInfo> lookup(std::string_view address) const;

  std::size_t size() const noexcept { return entries_; }

  // Throws SchemaMismatch with the 1-based line number on malformed lines.
  static IpLookupTable read(std::istream& in);
  static IpLookupTable load(const std::filesystem::path& path);

 private:
  static Uint128 mask(int length) noexcept;

  // prefix length (descending) -> masked network -> info
  struct Hash128 {
    std::size_t operator()(Uint128 v) const noexcept {
      const auto lo = static_cast<std::uint64_t>(v);
      const auto hi = static_cast<std::uint64_t>(v >> 64);
      return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
    }
  };
  std::map<int, std::unordered_map<Uint128, IpInfo, Hash128>, std::greater<>> by_length_;
  std::size_t entries_ = 0;
};

}  // namespace riskgate
