#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "riskgate/core/history.hpp"
#include "riskgate/core/types.hpp"
#include "riskgate/featurekit/ip_lookup.hpp"

namespace riskgate::synth {

struct PoolEntry {
  IpPrefix prefix;                     // a single address is a host prefix
  std::optional<std::string> country;  // overrides the lookup table
};

// Addresses an attacker can send requests from (proxies, VPN exits).
// On disk: one "address-or-cidr[, country]" per line, '#' starts a comment.
class AttackerPool {
 public:
  AttackerPool() = default;
  explicit AttackerPool(std::vector<PoolEntry> entries) : entries_(std::move(entries)) {}

  void add(PoolEntry entry) { entries_.push_back(std::move(entry)); }
  const std::vector<PoolEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  // Entry tag if present, else the table's country for the network address.
  std::optional<std::string> country_of(std::size_t entry, const IpLookupTable* lookup) const;
  // A uniformly drawn address inside the entry's prefix.
  std::string draw_address(std::size_t entry, std::mt19937_64& rng) const;

  static AttackerPool read(std::istream& in);
  static AttackerPool load(const std::filesystem::path& path);
  void write(std::ostream& out) const;

 private:
  std::vector<PoolEntry> entries_;
};

struct AttackSamplerOptions {
  std::size_t popular_user_agents = 10;
  // When false, donor events from the victim are allowed for the naive and
  // vpn models (the global distribution includes the victim).
  bool exclude_victim_from_global = false;
};

// Draws attacker logins against a fixed history state. All indices over the
// state are built once at construction; sample() is cheap.
//
// For a given victim and generator state, naive and vpn draws consume the
// generator identically for everything except the IP, which is drawn last.
class AttackSampler {
 public:
  // raw_features: columns an attack login carries (the dataset's raw
  // columns). Pre-extracted ip_*/ua_*/rtt_* columns follow their source.
  AttackSampler(HistoryView view, const AttackerPool& pool, const IpLookupTable* lookup,
                std::vector<std::string> raw_features, AttackSamplerOptions options = {});

  // Throws InvalidArgument when the victim has no logins in the state or
  // (targeted) no other user exists; NoPoolEntryForCountry for vpn.
  LoginEvent sample(AttackerModel model, const UserId& victim, std::mt19937_64& rng) const;

  const std::vector<std::string>& popular_user_agents() const noexcept { return popular_ua_; }
  const HistoryView& view() const noexcept { return view_; }

 private:
  struct Location {
    std::string asn;
    std::string country;
    std::string region;
  };
  struct VictimProfile {
    std::vector<std::size_t> ordinals;
    std::string country;
    std::string region;
    std::string asn;
  };

  Location location_of(std::size_t ordinal) const;
  VictimProfile profile(const UserId& victim) const;
  std::size_t pick_other(const std::vector<std::size_t>& ordinals, const UserId& victim,
                         std::mt19937_64& rng) const;
  std::optional<std::size_t> try_pick_other(const std::vector<std::size_t>& ordinals, const UserId& victim,
                                            std::mt19937_64& rng) const;
  Timestamp attack_time(std::size_t time_donor, std::mt19937_64& rng) const;
  void copy_group(LoginEvent& out, const LoginEvent& donor, const std::string& prefix) const;

  HistoryView view_;
  const AttackerPool* pool_;
  const IpLookupTable* lookup_;
  std::vector<std::string> raw_features_;
  AttackSamplerOptions options_;

  std::vector<std::size_t> legit_;                 // all legitimate ordinals in the state
  std::vector<Location> locations_;                // parallel to legit_
  std::unordered_map<std::size_t, std::size_t> position_;  // ordinal -> index in legit_
  std::map<std::string, std::vector<std::size_t>> by_region_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_ua_;
  std::vector<std::string> popular_ua_;
  std::map<std::string, std::vector<std::size_t>> pool_by_country_;
  Timestamp last_ts_ = 0;
};

// Generator seed for the k-th attack on the victim at position `victim_index`.
std::uint64_t attack_seed(std::uint64_t seed, std::size_t victim_index, std::size_t k) noexcept;

}  // namespace riskgate::synth
