#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskgate/core/dataset.hpp"
#include "riskgate/featurekit/ip_lookup.hpp"
#include "riskgate/synth/attacker.hpp"

namespace riskgate::synth {

// Raw columns the generator can emit.
inline const std::vector<std::string>& generator_features() {
  static const std::vector<std::string> names = {"ip", "ua", "rtt", "cookie", "fp", "screen", "lang"};
  return names;
}

struct PopulationConfig {
  std::uint64_t seed = 42;
  std::size_t users = 780;
  double mean_logins = 12.25;  // per user, including the first
  double sd_logins = 11.18;
  std::size_t max_logins = 83;
  double desktop_fraction = 0.811;     // share of logins from desktop devices
  double home_region_share = 0.85;     // users living in the service's city
  Timestamp start = 1533081600;        // 2018-08-01T00:00:00Z
  Timestamp end = 1593561599;          // 2020-06-30T23:59:59Z
  std::size_t pool_addresses_per_network = 40;
  std::vector<std::string> features = generator_features();

  // Throws Error(invalid_config) naming the offending field.
  void validate() const;
};

struct Population {
  Dataset dataset;
  IpLookupTable lookup;
  std::string lookup_text;  // the same table in its on-disk format
  AttackerPool pool;
};

// Deterministic for a given config (and standard library).
Population generate_population(const PopulationConfig& config);

}  // namespace riskgate::synth
