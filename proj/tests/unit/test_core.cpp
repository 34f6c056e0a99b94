#include <doctest.h>

#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "helpers.hpp"
#include "riskgate/core/dataset.hpp"
#include "riskgate/core/errors.hpp"
#include "riskgate/core/history.hpp"
#include "riskgate/core/value_hash.hpp"

using namespace riskgate;
using testing::login;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::invalid_argument;
}

// Counts recomputed from the raw log: the first `index` events.
struct NaiveCounts {
  std::size_t total = 0;
  std::map<std::string, std::size_t> user_logins;
  std::map<std::pair<std::string, FeatureValue>, std::size_t> global;
  std::map<std::tuple<std::string, std::string, FeatureValue>, std::size_t> per_user;
  std::map<std::string, std::set<FeatureValue>> values;

  NaiveCounts(const std::vector<LoginEvent>& events, std::size_t index, const std::set<std::string>& features) {
    for (std::size_t i = 0; i < index; ++i) {
      const auto& e = events[i];
      if (!e.label.legitimate()) continue;
      ++total;
      ++user_logins[e.user.str()];
      for (const auto& f : features) {
        const FeatureValue& v = e.value(f);
        ++global[{f, v}];
        ++per_user[{e.user.str(), f, v}];
        values[f].insert(v);
      }
    }
  }
};

std::set<std::string> feature_names(const std::vector<LoginEvent>& events) {
  std::set<std::string> out;
  for (const auto& e : events)
    for (const auto& [name, _] : e.features) out.insert(name);
  return out;
}

void check_against_naive(const HistoryView& view, const std::vector<LoginEvent>& events, std::size_t index) {
  const auto features = feature_names(events);
  const NaiveCounts naive(events, index, features);
  CHECK(view.total_logins() == naive.total);
  CHECK(view.user_count() == naive.user_logins.size());
  std::set<std::string> users;
  for (const auto& e : events) users.insert(e.user.str());
  for (const auto& u : users) {
    const auto it = naive.user_logins.find(u);
    CHECK(view.user_logins(UserId(u)) == (it == naive.user_logins.end() ? 0 : it->second));
  }
  for (const auto& f : features) {
    std::set<FeatureValue> candidates{FeatureValue::missing(), FeatureValue("never-seen")};
    for (const auto& e : events) candidates.insert(e.value(f));
    const auto vit = naive.values.find(f);
    CHECK(view.distinct_values(f) == (vit == naive.values.end() ? 0 : vit->second.size()));
    for (const auto& v : candidates) {
      const auto g = naive.global.find({f, v});
      CHECK(view.global_count(f, v) == (g == naive.global.end() ? 0 : g->second));
      for (const auto& u : users) {
        const auto p = naive.per_user.find({u, f, v});
        CHECK(view.user_value_count(UserId(u), f, v) == (p == naive.per_user.end() ? 0 : p->second));
      }
    }
    std::size_t dist_total = 0;
    for (const auto& [v, c] : view.global_distribution(f)) {
      CHECK(c == naive.global.at({f, v}));
      dist_total += c;
    }
    CHECK(dist_total == naive.total);
  }
}

}  // namespace

TEST_CASE("append updates per-user and global counts") {
  HistoryStore store;
  store.append(login("u1", 10, {{"ua", "FF/91"}}));
  CHECK(store.view().user_logins(UserId("u1")) == 1);
  CHECK(store.view().total_logins() == 1);

  store.append(login("u2", 11, {{"ua", "FF/91"}}));
  const auto v = store.view();
  CHECK(v.global_count("ua", FeatureValue("FF/91")) == 2);
  CHECK(v.user_value_count(UserId("u1"), "ua", FeatureValue("FF/91")) == 1);
  CHECK(v.user_value_count(UserId("u2"), "ua", FeatureValue("FF/91")) == 1);
}

TEST_CASE("attack events are logged but never counted") {
  HistoryStore store;
  for (int i = 0; i < 3; ++i) store.append(login("u1", 10 + i, {{"ip", "a"}}));
  store.append(login("u1", 20, {{"ip", "evil"}}, Label::attack_by(AttackerModel::naive)));
  CHECK(store.size() == 4);
  CHECK(store.view().total_logins() == 3);
  CHECK(store.view().global_count("ip", FeatureValue("evil")) == 0);
  CHECK(store.view().distinct_values("ip") == 1);
}

TEST_CASE("append rejects out-of-order timestamps and duplicate ids") {
  HistoryStore store;
  store.append(login("u1", 100, {}));
  CHECK(code_of([&] { store.append(login("u1", 99, {})); }) == Errc::out_of_order_timestamp);
  store.append(login("u2", 100, {}));  // ties keep insertion order

  LoginEvent a = login("u1", 101, {});
  a.id = "e1";
  store.append(a);
  LoginEvent b = login("u1", 102, {});
  b.id = "e1";
  CHECK(code_of([&] { store.append(b); }) == Errc::duplicate_event_id);
  CHECK(store.size() == 3);
}

TEST_CASE("state_at bounds") {
  HistoryStore store;
  store.append(login("u1", 1, {{"ip", "a"}}));
  store.append(login("u2", 2, {{"ip", "b"}}));
  const auto empty = store.state_at(0);
  CHECK(empty.total_logins() == 0);
  CHECK(empty.user_count() == 0);
  CHECK(empty.global_count("ip", FeatureValue("a")) == 0);
  CHECK(empty.distinct_values("ip") == 0);
  CHECK(store.state_at(2).total_logins() == store.view().total_logins());
  CHECK(code_of([&] { (void)store.state_at(3); }) == Errc::index_out_of_range);
}

TEST_CASE("an absent feature counts as MISSING") {
  HistoryStore store;
  store.append(login("u1", 1, {{"ip", "a"}}));
  store.append(login("u1", 2, {}));
  store.append(login("u2", 3, {{"ip", nullptr}}));
  const auto v = store.view();
  CHECK(v.global_count("ip", FeatureValue::missing()) == 2);
  CHECK(v.user_value_count(UserId("u1"), "ip", FeatureValue::missing()) == 1);
  CHECK(v.distinct_values("ip") == 2);
  CHECK(v.global_count("never", FeatureValue::missing()) == 3);
  CHECK(v.distinct_values("never") == 1);
  const auto dist = v.global_distribution("ip");
  REQUIRE(dist.size() == 2);
  CHECK(dist.back().first.is_missing());
  CHECK(dist.back().second == 2);
}

TEST_CASE("prefix states equal rebuilt stores on random corpora") {
  std::mt19937_64 rng(7);
  testing::CorpusShape shape;
  shape.attack_rate = 0.15;
  for (int trial = 0; trial < 40; ++trial) {
    const auto events = testing::random_corpus(rng, shape);
    const auto store = testing::store_of(events);
    for (std::size_t i = 0; i <= events.size(); i += 1 + events.size() / 7) {
      const auto rebuilt = testing::store_of(std::vector<LoginEvent>(events.begin(), events.begin() + static_cast<std::ptrdiff_t>(i)));
      check_against_naive(store.state_at(i), events, i);
      check_against_naive(rebuilt.view(), events, i);
    }
  }
}

TEST_CASE("counts are monotone in the prefix and untouched by attacks") {
  std::mt19937_64 rng(11);
  testing::CorpusShape shape;
  shape.attack_rate = 0.3;
  for (int trial = 0; trial < 20; ++trial) {
    const auto events = testing::random_corpus(rng, shape);
    const auto store = testing::store_of(events);
    std::vector<LoginEvent> legit;
    for (const auto& e : events)
      if (e.label.legitimate()) legit.push_back(e);
    const auto clean = testing::store_of(legit);
    const auto features = feature_names(events);
    for (const auto& f : features) {
      CHECK(store.view().distinct_values(f) == clean.view().distinct_values(f));
      CHECK(store.view().global_distribution(f) == clean.view().global_distribution(f));
      for (std::size_t i = 1; i <= events.size(); ++i)
        for (const auto& [v, c] : store.state_at(i - 1).global_distribution(f))
          CHECK(c <= store.state_at(i).global_count(f, v));
    }
  }
}

TEST_CASE("dataset round trip") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Dataset d;
    d.events = testing::random_corpus(rng, {.attack_rate = 0.2});
    for (auto& e : d.events)
      if (rng() % 5 == 0) e.id = "id-" + std::to_string(rng());
    d.meta = describe(d.events);
    // Declared columns absent from an event read back as explicit MISSING.
    for (auto& e : d.events)
      for (const auto& f : d.meta.feature_names) e.features.try_emplace(f, FeatureValue::missing());
    std::stringstream buf;
    write_dataset(buf, d);
    const Dataset back = read_dataset(buf);
    CHECK(back == d);
  }
}

TEST_CASE("dataset rows: missing columns and malformed rows") {
  std::string text = R"({"schemaVersion":1,"featureNames":["ip","ua"],"userCount":1})"
                     "\n";
  for (int i = 1; i <= 16; ++i) text += R"({"user":"u1","ts":)" + std::to_string(100 + i) + R"(,"label":"legitimate","f.ip":"a"})" "\n";
  std::istringstream ok(text);
  const auto d = read_dataset(ok);
  CHECK(d.events.size() == 16);
  CHECK(d.events[0].value("ua").is_missing());
  CHECK(d.events[0].value("ip") == FeatureValue("a"));

  std::istringstream bad(text + R"({"user":"u1","ts":"soon","label":"legitimate"})" "\n");
  try {
    read_dataset(bad);
    FAIL("expected SchemaMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::schema_mismatch);
    REQUIRE(e.row().has_value());
    CHECK(*e.row() == 17);
  }

  std::istringstream header_only(R"({"schemaVersion":1,"featureNames":[],"userCount":0})" "\n");
  CHECK(code_of([&] { read_dataset(header_only); }) == Errc::empty_dataset);
  std::istringstream version(R"({"schemaVersion":9,"featureNames":[],"userCount":0})" "\n");
  CHECK(code_of([&] { read_dataset(version); }) == Errc::schema_mismatch);
}

TEST_CASE("value hashing preserves equality and MISSING") {
  const ValueHasher h("salt");
  CHECK(h.hash(FeatureValue("a")) == h.hash(FeatureValue("a")));
  CHECK(h.hash(FeatureValue("a")) != h.hash(FeatureValue("b")));
  CHECK(h.hash(FeatureValue("a")) != FeatureValue("a"));
  CHECK(h.hash(FeatureValue::missing()).is_missing());
  CHECK(ValueHasher("other").hash(FeatureValue("a")) != h.hash(FeatureValue("a")));
}

TEST_CASE("labels and attacker model names") {
  CHECK(to_string(Label::legit()) == "legitimate");
  CHECK(parse_label("attack:vpn") == Label::attack_by(AttackerModel::vpn));
  CHECK(parse_attacker_model("targeted") == AttackerModel::targeted);
  CHECK(code_of([] { parse_attacker_model("ghost"); }) == Errc::invalid_argument);
  CHECK(code_of([] { UserId(""); }) == Errc::invalid_argument);
  CHECK_FALSE(FeatureValue::missing().matches(FeatureValue::missing()));
  CHECK(FeatureValue::missing() == FeatureValue::missing());
}

TEST_CASE("shared history serializes writers against concurrent readers") {
  SharedHistory shared;
  constexpr int kWrites = 2000;
  std::vector<std::thread> readers;
  std::atomic<bool> consistent{true};
  std::thread writer([&] {
    for (int i = 0; i < kWrites; ++i) shared.append(login("u" + std::to_string(i % 7), i + 1, {{"ip", "a"}}));
  });
  for (int r = 0; r < 4; ++r) {
    readers.emplace_back([&] {
      std::size_t last = 0;
      for (int i = 0; i < 500; ++i) {
        const auto [n, c] = shared.read([](const HistoryView& v) {
          return std::pair{v.total_logins(), v.global_count("ip", FeatureValue("a"))};
        });
        if (n != c || n < last) consistent = false;
        last = n;
      }
    });
  }
  writer.join();
  for (auto& t : readers) t.join();
  CHECK(consistent);
  CHECK(shared.read([](const HistoryView& v) { return v.total_logins(); }) == kWrites);
}
