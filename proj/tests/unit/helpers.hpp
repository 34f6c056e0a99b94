#pragma once

#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "riskgate/core/history.hpp"
#include "riskgate/core/types.hpp"

namespace testing {

using riskgate::FeatureValue;
using riskgate::LoginEvent;

inline LoginEvent login(const std::string& user, riskgate::Timestamp ts,
                        std::initializer_list<std::pair<const char*, const char*>> features,
                        riskgate::Label label = riskgate::Label::legit()) {
  LoginEvent e{std::nullopt, riskgate::UserId(user), ts, {}, label};
  for (const auto& [name, value] : features)
    e.features[name] = value ? FeatureValue(value) : FeatureValue::missing();
  return e;
}

struct CorpusShape {
  std::size_t max_users = 5;
  std::size_t max_logins = 50;
  std::size_t max_features = 4;
  std::size_t max_values = 4;     // per feature
  double missing_rate = 0.1;
  double attack_rate = 0.0;
};

// Random chronological corpus over features f0..f{k-1} with values v0.. and
// occasional MISSING.
inline std::vector<LoginEvent> random_corpus(std::mt19937_64& rng, const CorpusShape& shape = {}) {
  std::uniform_int_distribution<std::size_t> users(1, shape.max_users);
  std::uniform_int_distribution<std::size_t> count(1, shape.max_logins);
  std::uniform_int_distribution<std::size_t> features(1, shape.max_features);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t u = users(rng), n = count(rng), k = features(rng);
  std::vector<std::size_t> values(k);
  for (auto& v : values) v = std::uniform_int_distribution<std::size_t>(1, shape.max_values)(rng);
  std::vector<LoginEvent> out;
  riskgate::Timestamp ts = 1'600'000'000;
  for (std::size_t i = 0; i < n; ++i) {
    ts += static_cast<riskgate::Timestamp>(std::uniform_int_distribution<int>(0, 3)(rng));
    LoginEvent e{std::nullopt, riskgate::UserId("u" + std::to_string(std::uniform_int_distribution<std::size_t>(0, u - 1)(rng))),
                 ts, {}, riskgate::Label::legit()};
    for (std::size_t f = 0; f < k; ++f) {
      const std::string name = "f" + std::to_string(f);
      if (unit(rng) < shape.missing_rate) {
        if (unit(rng) < 0.5) e.features[name] = FeatureValue::missing();  // else absent
        continue;
      }
      e.features[name] = FeatureValue("v" + std::to_string(std::uniform_int_distribution<std::size_t>(0, values[f] - 1)(rng)));
    }
    if (unit(rng) < shape.attack_rate) e.label = riskgate::Label::attack_by(riskgate::AttackerModel::targeted);
    out.push_back(std::move(e));
  }
  return out;
}

inline riskgate::HistoryStore store_of(const std::vector<LoginEvent>& events) {
  riskgate::HistoryStore store;
  for (const auto& e : events) store.append(e);
  return store;
}

}  // namespace testing
