#include "riskgate/synth/attacker.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "riskgate/core/errors.hpp"
#include "riskgate/featurekit/catalog.hpp"
#include "riskgate/featurekit/derive.hpp"

namespace riskgate::synth {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

// Column group a raw column belongs to: its derivation source, or itself.
std::string group_of(const std::string& column) {
  for (std::string_view source : {columns::ip, columns::ua, columns::rtt}) {
    if (column == source || starts_with(column, std::string(source) + "_")) return std::string(source);
  }
  if (starts_with(column, "ts_")) return "ts";
  return column;
}

std::size_t uniform_index(std::size_t n, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

template <typename T>
std::string modal(const std::vector<std::pair<T, std::size_t>>& counts) {
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [value, count] : counts) {
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

void tally(std::vector<std::pair<std::string, std::size_t>>& counts, const std::string& value) {
  for (auto& [v, c] : counts) {
    if (v == value) {
      ++c;
      return;
    }
  }
  counts.emplace_back(value, 1);
}

}  // namespace

std::optional<std::string> AttackerPool::country_of(std::size_t entry, const IpLookupTable* lookup) const {
  const PoolEntry& e = entries_.at(entry);
  if (e.country) return e.country;
  if (lookup == nullptr) return std::nullopt;
  if (auto info = lookup->lookup(e.prefix.network)) return info->country;
  return std::nullopt;
}

std::string AttackerPool::draw_address(std::size_t entry, std::mt19937_64& rng) const {
  const PoolEntry& e = entries_.at(entry);
  const int host_bits = 128 - e.prefix.length;
  if (host_bits == 0) return e.prefix.network.to_string();
  // Cap the drawn span at 2^32 hosts; skip the network address itself.
  const int bits = std::min(host_bits, 32);
  const std::uint64_t span = (std::uint64_t{1} << bits) - 1;
  const std::uint64_t host = span <= 1 ? span : std::uniform_int_distribution<std::uint64_t>(1, span)(rng);
  return IpAddress{e.prefix.network.bits + host}.to_string();
}

AttackerPool AttackerPool::read(std::istream& in) {
  AttackerPool pool;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = trim(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = trim(view.substr(0, hash));
    if (view.empty()) continue;
    const auto comma = view.find(',');
    auto prefix = IpPrefix::parse(trim(view.substr(0, comma)));
    if (!prefix) throw Error(Errc::schema_mismatch, "bad pool address '" + std::string(view) + "'", number);
    PoolEntry entry{*prefix, std::nullopt};
    if (comma != std::string_view::npos) {
      const auto country = trim(view.substr(comma + 1));
      if (country.empty() || country.find(',') != std::string_view::npos) {
        throw Error(Errc::schema_mismatch, "bad pool country in '" + std::string(view) + "'", number);
      }
      entry.country = std::string(country);
    }
    pool.add(std::move(entry));
  }
  return pool;
}

AttackerPool AttackerPool::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open attacker pool " + path.string());
  return read(in);
}

void AttackerPool::write(std::ostream& out) const {
  out << "# address-or-cidr, country\n";
  for (const auto& e : entries_) {
    const bool host = e.prefix.length == 128;
    out << (host ? e.prefix.network.to_string() : e.prefix.to_string());
    if (e.country) out << ", " << *e.country;
    out << '\n';
  }
}

AttackSampler::AttackSampler(HistoryView view, const AttackerPool& pool, const IpLookupTable* lookup,
                             std::vector<std::string> raw_features, AttackSamplerOptions options)
    : view_(view), pool_(&pool), lookup_(lookup), raw_features_(std::move(raw_features)), options_(options) {
  const HistoryStore& store = view_.store();
  for (std::size_t i = 0; i < view_.index(); ++i) {
    const LoginEvent& e = store.event(i);
    if (!e.label.legitimate()) continue;
    position_[i] = legit_.size();
    legit_.push_back(i);
    locations_.push_back(location_of(i));
    const Location& loc = locations_.back();
    by_region_[loc.region].push_back(i);
    const FeatureValue& ua = e.value(columns::ua);
    if (!ua.is_missing()) by_ua_[ua.token()].push_back(i);
  }
  if (view_.index() > 0) last_ts_ = store.event(view_.index() - 1).timestamp;

  // Most frequent user agents; ties keep first-observed order.
  auto dist = view_.global_distribution(columns::ua);
  std::stable_sort(dist.begin(), dist.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [value, count] : dist) {
    if (popular_ua_.size() >= options_.popular_user_agents) break;
    if (!value.is_missing()) popular_ua_.push_back(value.token());
  }

  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (auto country = pool.country_of(i, lookup_)) pool_by_country_[*country].push_back(i);
  }
}

AttackSampler::Location AttackSampler::location_of(std::size_t ordinal) const {
  const LoginEvent& e = view_.store().event(ordinal);
  Location loc;
  const auto& asn = e.value(columns::ip_asn);
  const auto& country = e.value(columns::ip_country);
  const auto& region = e.value(columns::ip_region);
  loc.asn = asn.token();
  loc.country = country.token();
  loc.region = region.token();
  if ((asn.is_missing() || country.is_missing() || region.is_missing()) && lookup_ != nullptr) {
    const auto& ip = e.value(columns::ip);
    if (!ip.is_missing()) {
      if (auto info = lookup_->lookup(ip.token())) {
        if (asn.is_missing()) loc.asn = info->asn;
        if (country.is_missing()) loc.country = info->country;
        if (region.is_missing()) loc.region = info->region;
      }
    }
  }
  return loc;
}

AttackSampler::VictimProfile AttackSampler::profile(const UserId& victim) const {
  VictimProfile p;
  p.ordinals = view_.user_login_ordinals(victim);
  if (p.ordinals.empty()) {
    throw Error(Errc::invalid_argument, "victim '" + victim.str() + "' has no logins in this state");
  }
  std::vector<std::pair<std::string, std::size_t>> countries, regions, asns;
  for (std::size_t o : p.ordinals) {
    const Location& loc = locations_[position_.at(o)];
    tally(countries, loc.country);
    tally(regions, loc.region);
    tally(asns, loc.asn);
  }
  p.country = modal(countries);
  p.region = modal(regions);
  p.asn = modal(asns);
  return p;
}

std::optional<std::size_t> AttackSampler::try_pick_other(const std::vector<std::size_t>& ordinals,
                                                         const UserId& victim, std::mt19937_64& rng) const {
  if (ordinals.empty()) return std::nullopt;
  const HistoryStore& store = view_.store();
  for (int attempt = 0; attempt < 32; ++attempt) {
    const std::size_t o = ordinals[uniform_index(ordinals.size(), rng)];
    if (store.event(o).user != victim) return o;
  }
  std::vector<std::size_t> others;
  for (std::size_t o : ordinals) {
    if (store.event(o).user != victim) others.push_back(o);
  }
  if (others.empty()) return std::nullopt;
  return others[uniform_index(others.size(), rng)];
}

std::size_t AttackSampler::pick_other(const std::vector<std::size_t>& ordinals, const UserId& victim,
                                      std::mt19937_64& rng) const {
  if (auto o = try_pick_other(ordinals, victim, rng)) return *o;
  if (auto o = try_pick_other(legit_, victim, rng)) return *o;
  throw Error(Errc::invalid_argument, "targeted attack needs at least one other user");
}

Timestamp AttackSampler::attack_time(std::size_t time_donor, std::mt19937_64& rng) const {
  const TimeParts parts = time_parts(view_.store().event(time_donor).timestamp);
  // Start of the first full week after the state's last login.
  constexpr Timestamp kDay = 86400;
  const Timestamp day = last_ts_ / kDay + 1;
  const Timestamp weekday = (day + 3) % 7;
  const Timestamp monday = (day + (7 - weekday) % 7) * kDay;
  const Timestamp seconds = std::uniform_int_distribution<Timestamp>(0, 3599)(rng);
  return monday + parts.weekday * kDay + parts.hour * 3600 + seconds;
}

void AttackSampler::copy_group(LoginEvent& out, const LoginEvent& donor, const std::string& group) const {
  for (const auto& column : raw_features_) {
    if (group_of(column) != group) continue;
    out.features[column] = donor.value(column);
  }
}

LoginEvent AttackSampler::sample(AttackerModel model, const UserId& victim, std::mt19937_64& rng) const {
  const VictimProfile victim_profile = profile(victim);
  const HistoryStore& store = view_.store();
  LoginEvent out{std::nullopt, victim, 0, {}, Label::attack_by(model)};

  if (model == AttackerModel::targeted) {
    // Device-bound values: another user's login with one of the victim's
    // user agents, picked in proportion to the victim's usage.
    const LoginEvent& seen = store.event(victim_profile.ordinals[uniform_index(victim_profile.ordinals.size(), rng)]);
    std::optional<std::size_t> device;
    if (const auto& ua = seen.value(columns::ua); !ua.is_missing()) {
      if (auto it = by_ua_.find(ua.token()); it != by_ua_.end()) device = try_pick_other(it->second, victim, rng);
    }
    const auto& region_events = by_region_.count(victim_profile.region) ? by_region_.at(victim_profile.region)
                                                                         : legit_;
    if (!device) device = pick_other(region_events, victim, rng);

    // Network-bound values: another user's login from the victim's region.
    const std::size_t location = pick_other(region_events, victim, rng);

    // Login time: habits of users in the same region.
    const std::size_t time_donor = pick_other(region_events, victim, rng);

    const LoginEvent& device_event = store.event(*device);
    const LoginEvent& location_event = store.event(location);
    for (const auto& column : raw_features_) {
      const std::string group = group_of(column);
      if (group == "ts") continue;
      const bool network = group == columns::ip || group == columns::rtt;
      out.features[column] = (network ? location_event : device_event).value(column);
    }
    out.timestamp = attack_time(time_donor, rng);
    return out;
  }

  // naive and vpn share every draw up to the IP.
  if (legit_.empty()) throw Error(Errc::invalid_argument, "attack sampling needs a non-empty history");
  const std::size_t global = options_.exclude_victim_from_global ? pick_other(legit_, victim, rng)
                                                                 : legit_[uniform_index(legit_.size(), rng)];
  const LoginEvent& donor = store.event(global);
  std::optional<std::size_t> ua_source;
  if (!popular_ua_.empty()) {
    const std::string& ua = popular_ua_[uniform_index(popular_ua_.size(), rng)];
    ua_source = by_ua_.at(ua).front();
  }
  out.timestamp = attack_time(global, rng);
  for (const auto& column : raw_features_) {
    const std::string group = group_of(column);
    if (group == "ts" || group == columns::ip) continue;
    if (group == columns::ua && ua_source) continue;
    out.features[column] = donor.value(column);
  }
  if (ua_source) copy_group(out, store.event(*ua_source), std::string(columns::ua));

  if (pool_->empty()) throw Error(Errc::no_pool_entry_for_country, "attacker pool is empty");
  std::size_t entry = 0;
  if (model == AttackerModel::vpn) {
    auto it = pool_by_country_.find(victim_profile.country);
    if (it == pool_by_country_.end() || it->second.empty()) {
      throw Error(Errc::no_pool_entry_for_country, "no pool entry for country '" + victim_profile.country + "'");
    }
    entry = it->second[uniform_index(it->second.size(), rng)];
  } else {
    entry = uniform_index(pool_->size(), rng);
  }
  for (const auto& column : raw_features_) {
    if (column == columns::ip) out.features[column] = FeatureValue(pool_->draw_address(entry, rng));
  }
  return out;
}

std::uint64_t attack_seed(std::uint64_t seed, std::size_t victim_index, std::size_t k) noexcept {
  // splitmix64 over the combined key
  std::uint64_t z = seed ^ (static_cast<std::uint64_t>(victim_index) * 0x9e3779b97f4a7c15ULL) ^
                    (static_cast<std::uint64_t>(k) * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace riskgate::synth
