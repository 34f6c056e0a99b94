#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "riskgate/featurekit/ip_lookup.hpp"

namespace riskgate::synth {

enum class NetworkKind { broadband, mobile, campus, hosting };

struct Region {
  std::string name;
  std::string country;
  double rtt_base_ms = 0.0;  // typical minimum RTT to the service
};

struct Network {
  std::string asn;
  NetworkKind kind = NetworkKind::broadband;
  std::size_t region = 0;  // index into SyntheticWorld::regions()
  IpPrefix prefix;
  // Number of distinct host addresses in use (shared NAT pools are small).
  std::uint32_t host_pool = 65534;
};

// Fixed synthetic geography: one home country whose users mostly live in a
// single city-region, a handful of foreign countries, consumer networks per
// region, and hosting networks that only the attacker pool uses.
class SyntheticWorld {
 public:
  static const SyntheticWorld& standard();

  const std::vector<Region>& regions() const noexcept { return regions_; }
  const std::vector<Network>& networks() const noexcept { return networks_; }
  const std::string& home_country() const noexcept { return home_country_; }
  std::size_t home_region() const noexcept { return home_region_; }

  // Networks of a kind within a region (consumer use).
  std::vector<std::size_t> networks_in(std::size_t region, NetworkKind kind) const;
  std::vector<std::size_t> networks_of(NetworkKind kind) const;
  std::vector<std::size_t> regions_of(const std::string& country) const;

  // A host address inside the network's pool.
  std::string address(std::size_t network, std::uint32_t host) const;
  template <typename Rng>
  std::string random_address(std::size_t network, Rng& rng) const {
    std::uniform_int_distribution<std::uint32_t> pick(0, networks_.at(network).host_pool - 1);
    return address(network, pick(rng));
  }

  IpLookupTable lookup_table() const;
  void write_lookup_table(std::ostream& out) const;

 private:
  SyntheticWorld();

  std::string home_country_;
  std::size_t home_region_ = 0;
  std::vector<Region> regions_;
  std::vector<Network> networks_;
};

}  // namespace riskgate::synth
