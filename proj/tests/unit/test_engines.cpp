#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "extend_oracle.hpp"
#include "helpers.hpp"
#include "riskgate/core/errors.hpp"
#include "riskgate/engines/extend.hpp"
#include "riskgate/engines/simple.hpp"
#include "riskgate/featurekit/catalog.hpp"

using namespace riskgate;
using testing::login;

namespace {

constexpr Timestamp kDay = 86400;

FeatureCatalog toy_catalog() {
  FeatureCatalog c;
  for (const char* name : {"f0", "f1", "f2", "f3"}) {
    FeatureDescriptor d;
    d.name = name;
    c.add(d);
  }
  FeatureDescriptor mix;
  mix.name = "mix";
  mix.kind = FeatureKind::derived;
  mix.subfeatures = {{"f0", 0.5}, {"f1", 0.3}, {"f2", 0.2}};
  c.add(mix);
  return c;
}

double relative_error(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("decide boundary convention") {
  CHECK(decide(0.0, 0.5) == Decision::grant);
  CHECK(decide(0.5, 0.5) == Decision::challenge);
  CHECK(decide(0.6, 0.5) == Decision::challenge);
  CHECK_THROWS_AS(decide(0.1, -1.0), Error);
  CHECK_THROWS_AS(decide(0.1, std::nan("")), Error);
}

TEST_CASE("SIMPLE examples") {
  const auto cfg = SimpleConfig::ipua();
  HistoryStore store;
  store.append(login("u1", 1, {{"ip", "1.1.1.1"}, {"ip_country", "DE"}, {"ua", "A"}}));
  store.append(login("u1", 2, {{"ip", "2.2.2.2"}, {"ip_country", "DE"}, {"ua", "B"}}));
  store.append(login("u2", 3, {{"ip", "3.3.3.3"}, {"ip_country", "NO"}, {"ua", "C"}}));

  const auto full = score_simple(store.view(), login("u1", 4, {{"ip", "2.2.2.2"}, {"ip_country", "DE"}, {"ua", "A"}}), cfg, 0.1);
  CHECK(full.score == 0.0);
  CHECK(full.contributions.at("matchRatio") == 1.0);
  CHECK(full.decision == Decision::grant);

  const auto two = score_simple(store.view(), login("u1", 4, {{"ip", "3.3.3.3"}, {"ip_country", "DE"}, {"ua", "B"}}), cfg, 0.5);
  CHECK(two.score == doctest::Approx(1.0 / 3.0));
  CHECK(two.contributions.at("ip") == 0.0);
  CHECK(two.contributions.at("ua") == 1.0);

  const auto fresh = score_simple(store.view(), login("u9", 4, {{"ip", "1.1.1.1"}, {"ip_country", "DE"}, {"ua", "A"}}), cfg, 0.5);
  CHECK(fresh.score == 1.0);
  CHECK(fresh.contributions.at("matchRatio") == 0.0);

  HistoryStore miss;
  miss.append(login("u1", 1, {{"ip", nullptr}, {"ip_country", "DE"}, {"ua", "A"}}));
  CHECK(simple_risk(miss.view(), login("u1", 2, {{"ua", "A"}, {"ip_country", "DE"}}), cfg) == doctest::Approx(1.0 / 3.0));

  CHECK(SimpleEngine(SimpleConfig::ipua()).tag() == "simple-ipua");
  CHECK(SimpleEngine(SimpleConfig::all()).tag() == "simple-all");
  CHECK_THROWS_AS(SimpleConfig::custom({}).validate(), Error);
}

TEST_CASE("SIMPLE-ALL last-login window") {
  const auto cfg = SimpleConfig::all();
  HistoryStore store;
  store.append(login("u1", 0, {{"ip", "a"}, {"ip_country", "DE"}, {"ua", "A"}, {"fp", "h1"}}));
  const auto event = [](Timestamp ts) { return login("u1", ts, {{"ip", "a"}, {"ip_country", "DE"}, {"ua", "A"}, {"fp", "h1"}}); };
  CHECK(simple_risk(store.view(), event(31 * kDay), cfg) == 0.0);
  CHECK(simple_risk(store.view(), event(31 * kDay + 1), cfg) == doctest::Approx(0.2));
  CHECK(score_simple(store.view(), event(40 * kDay), cfg, 0.5).contributions.at(std::string(kLastLoginFeature)) == 0.0);
}

TEST_CASE("EXTEND self-consistent single user") {
  const auto catalog = toy_catalog();
  ExtendConfig cfg;
  cfg.features = {"f0"};
  HistoryStore store;
  for (int i = 0; i < 20; ++i) store.append(login("u1", i, {{"f0", "A"}}));
  const double s = score_extend(store.view(), login("u1", 100, {{"f0", "A"}}), catalog, cfg, 1.0).score;
  // p_global = 20.5/21 and p_user = (20 + p_global)/21 differ only in the smoothing mass.
  CHECK(s == doctest::Approx(1.0).epsilon(0.05));
  CHECK(extend_user_prior(store.view(), UserId("u1")) == doctest::Approx(1.0));
}

TEST_CASE("EXTEND cold start and the user prior") {
  const auto catalog = toy_catalog();
  ExtendConfig cfg;
  cfg.features = {"f0", "mix", "f3"};
  HistoryStore store;
  store.append(login("u1", 1, {{"f0", "A"}, {"f1", "x"}}));
  store.append(login("u2", 2, {{"f0", "B"}, {"f3", "z"}}));
  store.append(login("u2", 3, {{"f0", "B"}, {"f2", "q"}}));
  const auto v = store.view();
  const double N = 3, U = 2;
  const auto verdict = score_extend(v, login("new", 4, {{"f0", "A"}, {"f1", "y"}}), catalog, cfg, 1.0);
  CHECK(verdict.score == doctest::Approx((N + U) / U).epsilon(1e-12));
  CHECK(verdict.contributions.at("f0") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(verdict.contributions.at("userPrior") == doctest::Approx((N + U) / U));

  HistoryStore empty;
  CHECK(score_extend(empty.view(), login("new", 4, {{"f0", "A"}}), catalog, cfg, 1.0).score == 1.0);

  ExtendConfig bad;
  bad.features = {"ghost"};
  CHECK_THROWS_AS(bad.validate(catalog), Error);
  CHECK_THROWS_AS(ExtendConfig{}.validate(catalog), Error);
}

TEST_CASE("EXTEND matches the brute-force oracle on a hand-set 2x2 corpus") {
  const auto catalog = toy_catalog();
  ExtendConfig cfg;
  cfg.features = {"f0", "mix"};
  const std::vector<LoginEvent> history{
      login("alice", 1, {{"f0", "A"}, {"f1", "x"}, {"f2", "p"}}),
      login("bob", 2, {{"f0", "B"}, {"f1", "x"}, {"f2", nullptr}}),
      login("alice", 3, {{"f0", "A"}, {"f1", "y"}}),
      login("bob", 4, {{"f0", "C"}, {"f1", "x"}, {"f2", "p"}}),
  };
  const auto store = testing::store_of(history);
  for (const auto& q : {login("alice", 5, {{"f0", "A"}, {"f1", "x"}, {"f2", "p"}}), login("bob", 5, {{"f0", "A"}, {"f1", "z"}}),
                        login("carol", 5, {{"f0", "D"}})}) {
    const double s = score_extend(store.view(), q, catalog, cfg, 1.0).score;
    CHECK(relative_error(s, oracle::extend_score(history, q, catalog, cfg.features, cfg.smoothing)) <= 1e-9);
  }
}

TEST_CASE("property: EXTEND equals the oracle on random corpora of at most 50 logins") {
  std::mt19937_64 rng(21);
  const auto catalog = toy_catalog();
  testing::CorpusShape shape;
  shape.attack_rate = 0.1;
  const std::vector<std::vector<std::string>> sets{{"f0"}, {"f0", "f1"}, {"mix", "f3"}, {"f0", "f0", "mix"}};
  for (int trial = 0; trial < 150; ++trial) {
    const auto events = testing::random_corpus(rng, shape);
    ExtendConfig cfg;
    cfg.features = sets[static_cast<std::size_t>(trial) % sets.size()];
    cfg.smoothing = {0.5 + static_cast<double>(trial % 3), 0.25 + 0.25 * static_cast<double>(trial % 4)};
    const auto store = testing::store_of(events);
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::vector<LoginEvent> prefix(events.begin(), events.begin() + static_cast<std::ptrdiff_t>(i));
      const double s = score_extend(store.state_at(i), events[i], catalog, cfg, 1.0).score;
      CHECK(std::isfinite(s));
      CHECK(s > 0.0);
      CHECK(relative_error(s, oracle::extend_score(prefix, events[i], catalog, cfg.features, cfg.smoothing)) <= 1e-9);
    }
  }
}

TEST_CASE("property: attack events do not change scores and scoring is deterministic") {
  std::mt19937_64 rng(22);
  const auto catalog = toy_catalog();
  ExtendConfig ecfg;
  ecfg.features = {"f0", "mix"};
  const ExtendEngine extend(toy_catalog(), ecfg);
  const SimpleEngine simple(SimpleConfig::custom({"f0", "f1"}));
  testing::CorpusShape shape;
  shape.attack_rate = 0.3;
  for (int trial = 0; trial < 50; ++trial) {
    const auto events = testing::random_corpus(rng, shape);
    std::vector<LoginEvent> legit;
    for (const auto& e : events)
      if (e.label.legitimate()) legit.push_back(e);
    const auto noisy = testing::store_of(events);
    const auto clean = testing::store_of(legit);
    const auto probe = events.back();
    for (const RiskEngine* engine : {static_cast<const RiskEngine*>(&extend), static_cast<const RiskEngine*>(&simple)}) {
      CHECK(engine->score(noisy.view(), probe, 1.0) == engine->score(clean.view(), probe, 1.0));
      CHECK(engine->score(noisy.view(), probe, 1.0) == engine->score(noisy.view(), probe, 1.0));
      CHECK(engine->risk(noisy.view(), probe) == engine->score(noisy.view(), probe, 1.0).score);
    }
  }
}

TEST_CASE("property: score granularity") {
  std::mt19937_64 rng(23);
  ExtendConfig ecfg;
  ecfg.features = {"f0", "f1", "f2"};
  const ExtendEngine extend(toy_catalog(), ecfg);
  const auto scfg = SimpleConfig::custom({"f0", "f1", "f2"});
  testing::CorpusShape shape;
  shape.max_users = 10;
  shape.max_features = 3;
  shape.max_values = 6;
  for (int trial = 0; trial < 10; ++trial) {
    shape.max_logins = 200;
    std::vector<LoginEvent> events;
    while (events.size() < 200) events = testing::random_corpus(rng, shape);
    events.erase(events.begin() + 200, events.end());
    const auto store = testing::store_of(events);
    std::set<double> simple_scores, extend_scores;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const double s = simple_risk(store.state_at(i), events[i], scfg);
      double k = s * 3.0;
      CHECK(std::abs(k - std::round(k)) < 1e-12);  // always k/d
      simple_scores.insert(s);
      extend_scores.insert(extend.risk(store.state_at(i), events[i]));
    }
    CHECK(simple_scores.size() <= 4);
    CHECK(extend_scores.size() >= simple_scores.size());
  }
}
