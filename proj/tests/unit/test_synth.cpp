#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "riskgate/core/errors.hpp"
#include "riskgate/synth/attacker.hpp"
#include "riskgate/synth/population.hpp"
#include "riskgate/synth/world.hpp"

using namespace riskgate;
using namespace riskgate::synth;
using testing::login;

namespace {

PopulationConfig small(std::size_t users, std::uint64_t seed = 42) {
  PopulationConfig cfg;
  cfg.users = users;
  cfg.seed = seed;
  return cfg;
}

std::string serialized(const Dataset& d) {
  std::ostringstream out;
  write_dataset(out, d);
  return out.str();
}

const Population& shared_population() {
  static const Population p = generate_population(small(60, 9));
  return p;
}

}  // namespace

TEST_CASE("population generation is deterministic") {
  const auto a = generate_population(small(40, 1));
  const auto b = generate_population(small(40, 1));
  CHECK(serialized(a.dataset) == serialized(b.dataset));
  CHECK(a.lookup_text == b.lookup_text);
  std::ostringstream pa, pb;
  a.pool.write(pa);
  b.pool.write(pb);
  CHECK(pa.str() == pb.str());
  CHECK(serialized(generate_population(small(40, 2)).dataset) != serialized(a.dataset));
}

TEST_CASE("degenerate population of one user") {
  auto cfg = small(1);
  cfg.mean_logins = 5;
  const auto p = generate_population(cfg);
  CHECK(p.dataset.meta.user_count == 1);
  CHECK(p.dataset.events.size() >= 1);
  for (const auto& e : p.dataset.events) CHECK(e.label.legitimate());
}

TEST_CASE("default population shape") {
  const auto p = generate_population(PopulationConfig{});
  const auto& events = p.dataset.events;
  CHECK(p.dataset.meta.user_count == 780);
  const double mean = static_cast<double>(events.size()) / 780.0;
  CHECK(mean >= 12.25 * 0.85);
  CHECK(mean <= 12.25 * 1.15);
  std::map<std::string, std::size_t> per_user;
  for (std::size_t i = 0; i < events.size(); ++i) {
    ++per_user[events[i].user.str()];
    if (i) CHECK(events[i - 1].timestamp <= events[i].timestamp);
    CHECK(events[i].timestamp >= PopulationConfig{}.start);
    CHECK(events[i].timestamp <= PopulationConfig{}.end);
  }
  for (const auto& [_, n] : per_user) CHECK(n <= PopulationConfig{}.max_logins);
  CHECK(p.dataset.meta.feature_names == generator_features());
  // Every consumer address resolves through the shipped table.
  std::istringstream text(p.lookup_text);
  const auto table = IpLookupTable::read(text);
  for (std::size_t i = 0; i < events.size(); i += 97) CHECK(table.lookup(events[i].value("ip").token()).has_value());
}

TEST_CASE("population config validation") {
  auto cfg = small(0);
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = small(5);
  cfg.desktop_fraction = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = small(5);
  cfg.end = cfg.start - 1;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("attacker pool file format") {
  std::istringstream in("# pool\n198.51.100.7\n203.0.113.0/24, NO  # vpn exit\n\n2001:db8::/48\n");
  const auto pool = AttackerPool::read(in);
  REQUIRE(pool.size() == 3);
  CHECK(pool.entries()[0].prefix.length == 128);
  CHECK(pool.entries()[1].country == "NO");
  CHECK_FALSE(pool.entries()[2].country);

  std::mt19937_64 rng(1);
  CHECK(pool.draw_address(0, rng) == "198.51.100.7");
  const auto prefix = pool.entries()[1].prefix;
  for (int i = 0; i < 50; ++i) CHECK(prefix.contains(*IpAddress::parse(pool.draw_address(1, rng))));

  std::ostringstream out;
  pool.write(out);
  std::istringstream again(out.str());
  const auto back = AttackerPool::read(again);
  REQUIRE(back.size() == 3);
  CHECK(back.entries()[1].country == "NO");

  std::istringstream bad("10.0.0.0/8\nbogus\n");
  try {
    AttackerPool::read(bad);
    FAIL("expected SchemaMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::schema_mismatch);
    CHECK(e.row() == std::optional<std::size_t>(2));
  }
}

TEST_CASE("naive and vpn attacks") {
  const auto& p = shared_population();
  const auto store = testing::store_of(p.dataset.events);
  const AttackSampler sampler(store.view(), p.pool, &p.lookup, p.dataset.meta.feature_names);
  std::set<std::string> users;
  for (const auto& e : p.dataset.events) users.insert(e.user.str());
  std::mt19937_64 rng(77);
  const std::size_t before = store.view().total_logins();
  for (const auto& u : users) {
    const UserId victim(u);
    std::set<std::string> victim_ips;
    std::map<std::string, std::size_t> countries;
    for (auto o : store.view().user_login_ordinals(victim)) {
      const auto ip = store.event(o).value("ip").token();
      victim_ips.insert(ip);
      ++countries[p.lookup.lookup(ip)->country];
    }
    std::string modal;
    std::size_t best = 0;
    for (const auto& [c, n] : countries)
      if (n > best) best = n, modal = c;

    for (int k = 0; k < 5; ++k) {
      const auto naive = sampler.sample(AttackerModel::naive, victim, rng);
      CHECK(naive.label == Label::attack_by(AttackerModel::naive));
      CHECK(naive.user == victim);
      CHECK(victim_ips.count(naive.value("ip").token()) == 0);
      const auto ua = naive.value("ua").token();
      const auto& popular = sampler.popular_user_agents();
      CHECK(std::find(popular.begin(), popular.end(), ua) != popular.end());

      const auto vpn = sampler.sample(AttackerModel::vpn, victim, rng);
      const auto info = p.lookup.lookup(vpn.value("ip").token());
      std::optional<std::string> country = info ? std::optional(info->country) : std::nullopt;
      for (std::size_t i = 0; i < p.pool.size(); ++i)
        if (p.pool.entries()[i].prefix.contains(*IpAddress::parse(vpn.value("ip").token())) && p.pool.entries()[i].country)
          country = p.pool.entries()[i].country;
      CHECK(country == modal);
      CHECK(vpn.timestamp > p.dataset.events.back().timestamp);
    }
  }
  CHECK(store.view().total_logins() == before);
  CHECK(sampler.popular_user_agents().size() == 10);
}

TEST_CASE("targeted attacks never reuse victim-only values") {
  IpLookupTable table;
  table.add(*IpPrefix::parse("10.0.0.0/16"), {"AS1", "DE", "DE-BY"});
  table.add(*IpPrefix::parse("10.1.0.0/16"), {"AS2", "DE", "DE-BY"});
  table.add(*IpPrefix::parse("10.9.0.0/16"), {"AS3", "NO", "NO-03"});
  std::vector<LoginEvent> events;
  Timestamp ts = 1'600'000'000;
  const std::vector<std::string> uas{"UA-a", "UA-b", "UA-c", "UA-d"};
  for (int u = 0; u < 5; ++u) {
    for (int i = 0; i < 6; ++i) {
      const std::string user = "u" + std::to_string(u);
      const std::string ip = (u == 4 ? "10.9.0." : (i % 2 ? "10.1.0." : "10.0.0.")) + std::to_string(u * 10 + i % 3);
      const std::string ua = i < 3 ? uas[static_cast<std::size_t>(u % 2)] : "UA-own-" + user;
      const std::string cookie = "c-" + user + "-" + std::to_string(i % 2);
      const std::string rtt = std::to_string(20 + u) + ".5";
      events.push_back(login(user, ts, {{"ip", ip.c_str()}, {"ua", ua.c_str()}, {"cookie", cookie.c_str()}, {"rtt", rtt.c_str()}}));
      ts += 3600 * (1 + u);
    }
  }
  const auto store = testing::store_of(events);
  const AttackerPool pool;
  const std::vector<std::string> raw{"ip", "ua", "cookie", "rtt"};
  const AttackSampler sampler(store.view(), pool, &table, raw);

  for (int u = 0; u < 5; ++u) {
    const UserId victim("u" + std::to_string(u));
    // (feature, value) pairs seen by others
    std::set<std::pair<std::string, std::string>> others, victim_only;
    for (const auto& e : events)
      if (e.user != victim)
        for (const auto& f : raw) others.insert({f, e.value(f).token()});
    for (const auto& e : events)
      if (e.user == victim)
        for (const auto& f : raw)
          if (!others.count({f, e.value(f).token()})) victim_only.insert({f, e.value(f).token()});
    CHECK_FALSE(victim_only.empty());
    std::mt19937_64 rng(static_cast<std::uint64_t>(u));
    for (int k = 0; k < 200; ++k) {
      const auto a = sampler.sample(AttackerModel::targeted, victim, rng);
      CHECK(a.label == Label::attack_by(AttackerModel::targeted));
      for (const auto& f : raw) CHECK(victim_only.count({f, a.value(f).token()}) == 0);
      if (u < 4) CHECK(table.lookup(a.value("ip").token())->region == "DE-BY");
    }
  }

  HistoryStore lonely;
  lonely.append(login("solo", 1, {{"ip", "10.0.0.1"}}));
  const AttackSampler solo(lonely.view(), pool, &table, raw);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(solo.sample(AttackerModel::targeted, UserId("solo"), rng), Error);
  CHECK_THROWS_AS(solo.sample(AttackerModel::targeted, UserId("ghost"), rng), Error);
  try {
    solo.sample(AttackerModel::vpn, UserId("solo"), rng);
    FAIL("expected NoPoolEntryForCountry");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_pool_entry_for_country);
  }
}

TEST_CASE("attack seeds") {
  std::set<std::uint64_t> seen;
  for (std::size_t v = 0; v < 100; ++v)
    for (std::size_t k = 0; k < 25; ++k) seen.insert(attack_seed(42, v, k));
  CHECK(seen.size() == 2500);
  CHECK(attack_seed(42, 3, 4) == attack_seed(42, 3, 4));
  CHECK(attack_seed(42, 3, 4) != attack_seed(43, 3, 4));

  const auto& p = shared_population();
  const auto store = testing::store_of(p.dataset.events);
  const AttackSampler sampler(store.view(), p.pool, &p.lookup, p.dataset.meta.feature_names);
  const UserId victim = p.dataset.events.front().user;
  for (auto model : {AttackerModel::naive, AttackerModel::vpn, AttackerModel::targeted}) {
    std::mt19937_64 r1(attack_seed(5, 0, 0)), r2(attack_seed(5, 0, 0));
    CHECK(sampler.sample(model, victim, r1) == sampler.sample(model, victim, r2));
  }
}

TEST_CASE("synthetic world") {
  const auto& w = SyntheticWorld::standard();
  CHECK_FALSE(w.regions_of(w.home_country()).empty());
  CHECK_FALSE(w.networks_of(NetworkKind::hosting).empty());
  const auto table = w.lookup_table();
  for (std::size_t n = 0; n < w.networks().size(); ++n) {
    const auto info = table.lookup(w.address(n, 0));
    REQUIRE(info.has_value());
    CHECK(info->asn == w.networks()[n].asn);
    CHECK(info->region == w.regions()[w.networks()[n].region].name);
  }
}
