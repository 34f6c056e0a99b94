#include <doctest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "riskgate/core/errors.hpp"
#include "riskgate/featurekit/catalog.hpp"
#include "riskgate/featurekit/derive.hpp"
#include "riskgate/featurekit/ip_lookup.hpp"
#include "riskgate/featurekit/probability.hpp"
#include "riskgate/featurekit/user_agent.hpp"

using namespace riskgate;
using testing::login;

namespace {

Timestamp utc(int y, unsigned m, unsigned d, int hh, int mm, int ss) {
  using namespace std::chrono;
  const sys_seconds t = sys_days{year{y} / month{m} / day{d}} + hours{hh} + minutes{mm} + seconds{ss};
  return t.time_since_epoch().count();
}

HistoryStore four_a() {
  HistoryStore store;
  store.append(login("u1", 1, {{"f", "A"}}));
  store.append(login("u1", 2, {{"f", "A"}}));
  store.append(login("u1", 3, {{"f", "A"}}));
  store.append(login("u2", 4, {{"f", "A"}}));
  return store;
}

FeatureDescriptor raw(const std::string& name) {
  FeatureDescriptor d;
  d.name = name;
  return d;
}

const char* kChromeWin =
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/70.0.3538.77 Safari/537.36";
const char* kSafariIphone =
    "Mozilla/5.0 (iPhone; CPU iPhone OS 12_1 like Mac OS X) AppleWebKit/605.1.15 (KHTML, like Gecko) Version/12.0 "
    "Mobile/15E148 Safari/604.1";

}  // namespace

TEST_CASE("timestamp subfeatures") {
  const auto parts = time_parts(utc(2018, 10, 15, 22, 17, 35));
  CHECK(parts.weekday == 0);
  CHECK(parts.hour == 22);
  CHECK(parts.weekday_hour() == 22);

  const auto wed = time_parts(utc(2018, 10, 17, 12, 0, 0));
  CHECK(wed.weekday_hour() == 212);
  const auto sun = time_parts(utc(1969, 12, 28, 23, 59, 59));
  CHECK(sun.weekday == 6);
  CHECK(sun.hour == 23);
}

TEST_CASE("rtt buckets") {
  const std::vector<double> m{22.551, 36.875, 31.619};
  const auto b = rtt_buckets(m);
  CHECK(b.raw_ms == doctest::Approx(22.551));
  CHECK(b.ms == 23);
  CHECK(b.ms5 == 25);
  CHECK(b.ms10 == 20);

  const std::vector<double> half{12.5, 40.0};
  CHECK(rtt_buckets(half).ms == 13);
  CHECK(rtt_buckets(half).ms5 == 15);

  auto parsed = parse_rtt_measurements("[22.551; 36.875, 31.619]");
  REQUIRE(parsed);
  CHECK(parsed->size() == 3);
  CHECK_FALSE(parse_rtt_measurements("12,abc"));
  CHECK_FALSE(parse_rtt_measurements(""));
  CHECK(format_rtt_measurements(*parsed) == "22.551,36.875,31.619");
}

TEST_CASE("derive_subfeatures on the builtin catalog") {
  IpLookupTable table;
  table.add(*IpPrefix::parse("10.0.0.0/8"), {"AS1", "DE", "DE-BY"});
  const auto catalog = FeatureCatalog::builtin();

  auto e = login("u1", utc(2018, 10, 15, 22, 17, 35), {{"ip", "10.1.2.3"}, {"ua", kChromeWin}, {"rtt", "22.551,36.875,31.619"}});
  const auto out = derive_subfeatures(e, catalog, &table);
  CHECK(out.at("ip_asn") == FeatureValue("AS1"));
  CHECK(out.at("ip_country") == FeatureValue("DE"));
  CHECK(out.at("ip_region") == FeatureValue("DE-BY"));
  CHECK(out.at("ua_browser") == FeatureValue("Chrome 70"));
  CHECK(out.at("ua_os") == FeatureValue("Windows 10"));
  CHECK(out.at("ua_device") == FeatureValue("desktop"));
  CHECK(out.at("ts_hour") == FeatureValue("22"));
  CHECK(out.at("ts_weekday") == FeatureValue("0"));
  CHECK(out.at("ts_weekday_hour") == FeatureValue("22"));
  CHECK(out.at("rtt_raw") == FeatureValue("22.551"));
  CHECK(out.at("rtt_ms") == FeatureValue("23"));
  CHECK(out.at("rtt_5ms") == FeatureValue("25"));
  CHECK(out.at("rtt_10ms") == FeatureValue("20"));
  CHECK(derive_subfeatures(e, catalog, &table) == out);

  auto bare = login("u1", 0, {{"ip", "192.168.0.1"}});
  const auto missing = derive_subfeatures(bare, catalog, &table);
  for (const char* c : {"ua_browser", "ua_os", "ua_device", "ip_asn", "ip_country", "ip_region", "rtt_ms"})
    CHECK(missing.at(c).is_missing());

  auto pre = login("u1", 0, {{"ua", kChromeWin}, {"ua_browser", "Custom 1"}});
  CHECK(derive_subfeatures(pre, catalog, &table).at("ua_browser") == FeatureValue("Custom 1"));

  try {
    derive_subfeatures(e, catalog, nullptr);
    FAIL("expected LookupTableMissing");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::lookup_table_missing);
  }
  FeatureCatalog odd;
  odd.set_derivations({"astrology"});
  try {
    derive_subfeatures(e, odd, &table);
    FAIL("expected UnknownDerivationRule");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::unknown_derivation_rule);
  }
}

TEST_CASE("user agent parser families") {
  const auto iphone = parse_user_agent(kSafariIphone);
  CHECK(iphone.browser == "Safari 12");
  CHECK(iphone.os == "iOS 12.1");
  CHECK(iphone.device_type == "mobile");

  const auto edge = parse_user_agent(
      "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/70.0 Safari/537.36 "
      "Edge/17.17134");
  CHECK(edge.browser == "Edge 17");

  const auto ff = parse_user_agent("Mozilla/5.0 (X11; Ubuntu; Linux x86_64; rv:63.0) Gecko/20100101 Firefox/63.0");
  CHECK(ff.browser == "Firefox 63");
  CHECK(ff.os == "Linux");

  const auto android = parse_user_agent(
      "Mozilla/5.0 (Linux; Android 9; Pixel 2) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/70.0 Mobile Safari/537.36");
  CHECK(android.os == "Android 9");
  CHECK(android.device_type == "mobile");

  const auto junk = parse_user_agent("curl/7.61");
  CHECK_FALSE(junk.browser);
  CHECK_FALSE(junk.os);
}

TEST_CASE("ip lookup longest prefix match") {
  std::istringstream text(
      "# prefix, asn, country, region\n"
      "10.0.0.0/8, AS1, DE, DE-BY\n"
      "10.1.0.0/16, AS2, DE, DE-BE\n"
      "10.1.2.3, AS3, DE, DE-HH\n"
      "2001:db8::/32, AS4, NO, NO-03\n");
  const auto table = IpLookupTable::read(text);
  CHECK(table.size() == 4);
  CHECK(table.lookup("10.9.9.9")->asn == "AS1");
  CHECK(table.lookup("10.1.9.9")->asn == "AS2");
  CHECK(table.lookup("10.1.2.3")->asn == "AS3");
  CHECK(table.lookup("2001:db8:1::5")->country == "NO");
  CHECK_FALSE(table.lookup("11.0.0.1"));
  CHECK_FALSE(table.lookup("not-an-ip"));

  CHECK(IpAddress::parse("10.1.2.3")->to_string() == "10.1.2.3");
  CHECK(IpAddress::parse("2001:0db8:0:0:0:0:0:1")->to_string() == "2001:db8::1");
  CHECK_FALSE(IpAddress::parse("10.1.2"));
  CHECK_FALSE(IpAddress::parse("256.1.1.1"));

  std::istringstream bad("10.0.0.0/8, AS1, DE, DE-BY\nnonsense\n");
  try {
    IpLookupTable::read(bad);
    FAIL("expected SchemaMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::schema_mismatch);
    CHECK(e.row() == std::optional<std::size_t>(2));
  }
}

TEST_CASE("p_global and p_user hand-evaluated examples") {
  const SmoothingConfig cfg;
  HistoryStore empty;
  CHECK(p_global(empty.view(), "f", FeatureValue("A"), cfg) == 1.0);

  const auto store = four_a();
  const auto v = store.view();
  CHECK(p_global(v, "f", FeatureValue("A"), cfg) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(p_global(v, "f", FeatureValue("B"), cfg) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(p_user(v, UserId("u1"), "f", FeatureValue("A"), cfg) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(p_user(v, UserId("u1"), "f", FeatureValue("B"), cfg) == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(p_user(v, UserId("nobody"), "f", FeatureValue("A"), cfg) == p_global(v, "f", FeatureValue("A"), cfg));
}

TEST_CASE("weighted mixtures") {
  const SmoothingConfig cfg;
  HistoryStore store;
  store.append(login("u1", 1, {{"a", "x"}, {"b", "y"}, {"c", "z"}}));
  store.append(login("u1", 2, {{"a", "x"}, {"b", "q"}, {"c", "z"}}));
  store.append(login("u2", 3, {{"a", "w"}, {"b", "y"}, {"c", nullptr}}));
  const auto v = store.view();
  const auto q = login("u1", 4, {{"a", "x"}, {"b", "y"}});  // c absent -> MISSING

  FeatureDescriptor d;
  d.name = "mix";
  d.subfeatures = {{"a", 0.6}, {"b", 0.3}, {"c", 0.1}};
  const UserId u1("u1");
  for (const UserId* scope : {static_cast<const UserId*>(nullptr), &u1}) {
    double expected = 0.0;
    for (const auto& s : d.subfeatures) expected += s.weight * p_scoped(v, scope, s.source, q.value(s.source), cfg);
    CHECK(p_feature_weighted(v, scope, d, q, cfg) == doctest::Approx(expected).epsilon(1e-12));
  }
  const double dot = 0.6 * 0.5 + 0.3 * 0.8 + 0.1 * 0.9;
  CHECK(dot == doctest::Approx(0.63));

  const auto both = feature_probabilities(v, u1, d, q, cfg);
  CHECK(both.global == doctest::Approx(p_feature_weighted(v, nullptr, d, q, cfg)));
  CHECK(both.user == doctest::Approx(p_feature_weighted(v, &u1, d, q, cfg)));

  CHECK(p_feature_weighted(v, &u1, raw("a"), q, cfg) == p_user(v, u1, "a", FeatureValue("x"), cfg));

  FeatureDescriptor same;
  same.name = "same";
  same.subfeatures = {{"a", 0.25}, {"a", 0.75}};
  CHECK(p_feature_weighted(v, &u1, same, q, cfg) == doctest::Approx(p_user(v, u1, "a", FeatureValue("x"), cfg)));

  FeatureDescriptor broken = d;
  broken.subfeatures[0].weight = 0.7;
  try {
    (void)p_feature_weighted(v, &u1, broken, q, cfg);
    FAIL("expected WeightSumInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::weight_sum_invalid);
  }
}

TEST_CASE("builtin catalog weights") {
  const auto catalog = FeatureCatalog::builtin();
  const auto ip = catalog.at("ip").components();
  REQUIRE(ip.size() == 3);
  CHECK(ip[0] == Subfeature{"ip", 0.6});
  CHECK(ip[1] == Subfeature{"ip_asn", 0.3});
  CHECK(ip[2] == Subfeature{"ip_country", 0.1});
  const auto ua = catalog.at("ua").components();
  REQUIRE(ua.size() == 4);
  CHECK(ua[0].weight == 0.53);
  CHECK(ua[1].weight == 0.27);
  CHECK(ua[2].weight == 0.19);
  CHECK(ua[3].weight == 0.01);
  for (const auto& [_, d] : catalog.descriptors()) CHECK_NOTHROW(d.validate());
  try {
    (void)catalog.at("nope");
    FAIL("expected UnknownFeature");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_feature);
  }
  SmoothingConfig bad{0.0, 0.5};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("property: p_global is normalized over observed values plus the unseen bucket") {
  std::mt19937_64 rng(5);
  const SmoothingConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    const auto events = testing::random_corpus(rng);
    const auto store = testing::store_of(events);
    const auto v = store.view();
    for (const std::string f : {"f0", "f1", "f2", "f3"}) {
      double sum = p_global(v, f, FeatureValue("unseen-value"), cfg);
      for (const auto& [value, _] : v.global_distribution(f)) sum += p_global(v, f, value, cfg);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("property: p_user interpolates between the user MLE and p_global") {
  std::mt19937_64 rng(6);
  const SmoothingConfig cfg{2.5, 0.3};
  for (int trial = 0; trial < 200; ++trial) {
    const auto events = testing::random_corpus(rng);
    const auto store = testing::store_of(events);
    const auto v = store.view();
    for (const auto& e : events) {
      for (const auto& [f, value] : e.features) {
        const double pu = p_user(v, e.user, f, value, cfg);
        const double pg = p_global(v, f, value, cfg);
        const double n = static_cast<double>(v.user_logins(e.user));
        const double mle = n > 0 ? static_cast<double>(v.user_value_count(e.user, f, value)) / n : pg;
        CHECK(pu > 0.0);
        CHECK(pu >= std::min(mle, pg) - 1e-12);
        CHECK(pu <= std::max(mle, pg) + 1e-12);
      }
    }
  }
}

TEST_CASE("property: one more login raises its own value and lowers every other") {
  std::mt19937_64 rng(8);
  const SmoothingConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    auto events = testing::random_corpus(rng);
    const auto before = testing::store_of(events);
    const auto& last = events.back();
    auto next = testing::login(last.user.str(), last.timestamp + 1, {{"f0", "v0"}});
    auto after = testing::store_of(events);
    after.append(next);
    const auto bv = before.view(), av = after.view();
    CHECK(p_user(av, next.user, "f0", FeatureValue("v0"), cfg) > p_user(bv, next.user, "f0", FeatureValue("v0"), cfg));
    CHECK(p_global(av, "f0", FeatureValue("v0"), cfg) > p_global(bv, "f0", FeatureValue("v0"), cfg));
    for (const char* other : {"v1", "v2", "v3", "never"}) {
      const FeatureValue o(other);
      CHECK(p_user(av, next.user, "f0", o, cfg) < p_user(bv, next.user, "f0", o, cfg));
      CHECK(p_global(av, "f0", o, cfg) < p_global(bv, "f0", o, cfg));
    }
  }
}
