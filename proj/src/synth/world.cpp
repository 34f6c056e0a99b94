#include "riskgate/synth/world.hpp"

#include <ostream>
#include <sstream>

namespace riskgate::synth {

namespace {

IpPrefix v4_prefix(int a, int b) {
  return *IpPrefix::parse(std::to_string(a) + "." + std::to_string(b) + ".0.0/16");
}

}  // namespace

SyntheticWorld::SyntheticWorld() : home_country_("DE") {
  // Home country regions; index 0 is the city most users live in.
  const std::vector<std::pair<std::string, double>> home = {
      {"NW", 9.0},  {"RP", 14.0}, {"HE", 15.0}, {"NI", 17.0}, {"BW", 19.0},
      {"HH", 20.0}, {"BY", 22.0}, {"BE", 24.0}, {"SN", 26.0}, {"SH", 23.0},
  };
  for (const auto& [name, rtt] : home) regions_.push_back(Region{name, home_country_, rtt});
  home_region_ = 0;

  const std::vector<std::tuple<std::string, std::string, double>> foreign = {
      {"NL-NH", "NL", 16.0}, {"FR-IDF", "FR", 22.0}, {"GB-LND", "GB", 25.0}, {"PL-MZ", "PL", 32.0},
      {"US-VA", "US", 95.0}, {"US-CA", "US", 160.0}, {"RU-MOW", "RU", 55.0}, {"UA-KV", "UA", 48.0},
      {"BR-SP", "BR", 210.0}, {"IN-MH", "IN", 150.0}, {"CN-BJ", "CN", 230.0}, {"TR-IST", "TR", 60.0},
  };
  for (const auto& [name, country, rtt] : foreign) regions_.push_back(Region{name, country, rtt});

  int second_octet = 0;
  auto add = [&](std::string asn, NetworkKind kind, std::size_t region, int first_octet, std::uint32_t pool) {
    networks_.push_back(Network{std::move(asn), kind, region, v4_prefix(first_octet, second_octet++), pool});
  };

  // Consumer broadband: national ISPs in every home region plus a city
  // carrier in the home region.
  const std::vector<std::string> national = {"AS3320", "AS3209", "AS6805", "AS8881", "AS31334"};
  for (std::size_t r = 0; r < home.size(); ++r) {
    for (const auto& asn : national) add(asn, NetworkKind::broadband, r, 84, 65534);
  }
  add("AS8422", NetworkKind::broadband, home_region_, 84, 65534);
  // University network behind a small NAT pool in the home city.
  add("AS680", NetworkKind::campus, home_region_, 84, 24);
  // Mobile carriers: carrier-grade NAT pools registered to one region each.
  second_octet = 0;
  add("AS3320", NetworkKind::mobile, 2, 85, 600);
  add("AS3209", NetworkKind::mobile, 0, 85, 600);
  add("AS6805", NetworkKind::mobile, 6, 85, 600);

  // Foreign consumer ISPs.
  second_octet = 0;
  int foreign_asn = 7000;
  for (std::size_t r = home.size(); r < regions_.size(); ++r) {
    add("AS" + std::to_string(foreign_asn++), NetworkKind::broadband, r, 86, 65534);
    add("AS" + std::to_string(foreign_asn++), NetworkKind::broadband, r, 86, 65534);
  }

  // Hosting and VPN networks: never used by the population.
  second_octet = 0;
  add("AS24940", NetworkKind::hosting, 6, 95, 65534);   // DE
  add("AS51167", NetworkKind::hosting, 0, 95, 65534);   // DE
  add("AS9009", NetworkKind::hosting, 2, 95, 65534);    // DE
  int hosting_asn = 60000;
  for (std::size_t r = home.size(); r < regions_.size(); ++r) {
    add("AS" + std::to_string(hosting_asn++), NetworkKind::hosting, r, 95, 65534);
  }
}

const SyntheticWorld& SyntheticWorld::standard() {
  static const SyntheticWorld world;
  return world;
}

std::vector<std::size_t> SyntheticWorld::networks_in(std::size_t region, NetworkKind kind) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < networks_.size(); ++i) {
    if (networks_[i].region == region && networks_[i].kind == kind) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> SyntheticWorld::networks_of(NetworkKind kind) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < networks_.size(); ++i) {
    if (networks_[i].kind == kind) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> SyntheticWorld::regions_of(const std::string& country) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].country == country) out.push_back(i);
  }
  return out;
}

std::string SyntheticWorld::address(std::size_t network, std::uint32_t host) const {
  const Network& net = networks_.at(network);
  const std::uint32_t offset = 1 + (host % net.host_pool);  // skip .0.0
  const auto base = static_cast<std::uint32_t>(net.prefix.network.bits & 0xffffffffu);
  const std::uint32_t addr = base + offset;
  std::ostringstream os;
  os << (addr >> 24) << '.' << ((addr >> 16) & 0xff) << '.' << ((addr >> 8) & 0xff) << '.' << (addr & 0xff);
  return os.str();
}

IpLookupTable SyntheticWorld::lookup_table() const {
  IpLookupTable table;
  for (const auto& net : networks_) {
    const Region& region = regions_[net.region];
    table.add(net.prefix, IpInfo{net.asn, region.country, region.name});
  }
  return table;
}

void SyntheticWorld::write_lookup_table(std::ostream& out) const {
  out << "# cidr-prefix, asn, country, region\n";
  for (const auto& net : networks_) {
    const Region& region = regions_[net.region];
    out << net.prefix.to_string() << ", " << net.asn << ", " << region.country << ", " << region.name << '\n';
  }
}

}  // namespace riskgate::synth
