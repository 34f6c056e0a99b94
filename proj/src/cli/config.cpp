#include "riskgate/cli/config.hpp"

#include <fstream>
#include <set>

#include "riskgate/core/errors.hpp"

namespace riskgate::cli {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(Errc::config_invalid, path + ": " + message);
}

// A JSON object plus its field path, rejecting unknown keys.
class Section {
 public:
  Section(const json& j, std::string path, std::set<std::string> known) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "must be an object");
    for (const auto& [key, _] : j_.items())
      if (!known.count(key)) fail(field(key), "unknown field");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const json* find(const std::string& key) const {
    const auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  template <typename T>
  void read(const std::string& key, T& out) const {
    const json* v = find(key);
    if (!v) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v->is_boolean()) fail(field(key), "must be a boolean");
      } else if constexpr (std::is_unsigned_v<T>) {
        if (!v->is_number_unsigned()) fail(field(key), "must be a non-negative integer");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v->is_number_integer()) fail(field(key), "must be an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v->is_number()) fail(field(key), "must be a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v->is_string()) fail(field(key), "must be a string");
      }
      out = v->get<T>();
    } catch (const json::exception& e) {
      fail(field(key), e.what());
    }
  }

  template <typename T>
  void read_list(const std::string& key, std::vector<T>& out) const {
    const json* v = find(key);
    if (!v) return;
    if (!v->is_array()) fail(field(key), "must be a list");
    std::vector<T> items;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& item = (*v)[i];
      const std::string at = field(key) + "[" + std::to_string(i) + "]";
      if constexpr (std::is_same_v<T, std::string>) {
        if (!item.is_string()) fail(at, "must be a string");
      } else if constexpr (std::is_unsigned_v<T>) {
        if (!item.is_number_unsigned()) fail(at, "must be a non-negative integer");
      } else {
        if (!item.is_number()) fail(at, "must be a number");
      }
      items.push_back(item.get<T>());
    }
    out = std::move(items);
  }

  void read_path(const std::string& key, std::optional<fs::path>& out, const fs::path& base) const {
    std::string s;
    if (!find(key)) return;
    read(key, s);
    if (s.empty()) fail(field(key), "must not be empty");
    fs::path p(s);
    out = p.is_absolute() || base.empty() ? p : base / p;
  }

  Section sub(const std::string& key, std::set<std::string> known) const {
    return Section(j_.at(key), field(key), std::move(known));
  }
  bool has(const std::string& key) const { return find(key) != nullptr; }

 private:
  const json& j_;
  std::string path_;
};

AttackerModel model_from(const std::string& text, const std::string& path) {
  try {
    return parse_attacker_model(text);
  } catch (const Error&) {
    fail(path, "unknown attacker model '" + text + "'");
  }
}

SimpleConfig simple_from(const json& j, const std::string& path) {
  const Section s(j, path, {"variant", "features", "lastLoginWindowDays"});
  std::string variant = "ipua";
  s.read("variant", variant);
  SimpleConfig cfg;
  if (variant == "ipua") {
    cfg = SimpleConfig::ipua();
  } else if (variant == "all") {
    cfg = SimpleConfig::all();
  } else if (variant == "custom") {
    std::vector<std::string> features;
    s.read_list("features", features);
    cfg = SimpleConfig::custom(std::move(features));
  } else {
    fail(s.field("variant"), "must be 'ipua', 'all' or 'custom'");
  }
  if (variant != "custom" && s.has("features")) fail(s.field("features"), "only allowed for the custom variant");
  s.read("lastLoginWindowDays", cfg.last_login_window_days);
  return cfg;
}

void read_smoothing(const Section& parent, const std::string& key, SmoothingConfig& out) {
  if (!parent.has(key)) return;
  const Section s = parent.sub(key, {"alpha", "beta"});
  s.read("alpha", out.alpha_user);
  s.read("beta", out.beta_global);
}

ordered_json path_json(const std::optional<fs::path>& p) {
  return p ? ordered_json(p->generic_string()) : ordered_json(nullptr);
}

ordered_json smoothing_json(const SmoothingConfig& s) {
  return {{"alpha", s.alpha_user}, {"beta", s.beta_global}};
}

}  // namespace

RunConfig parse_run_config(const json& j, const fs::path& base) {
  const Section root(j, "", {"seed", "output", "generator", "dataset", "engine", "attacker", "evaluation",
                             "featbench", "perfbench", "service"});
  RunConfig cfg;
  root.read("seed", cfg.seed);
  std::optional<fs::path> out;
  root.read_path("output", out, base);
  if (out) cfg.output = *out;

  if (root.has("generator")) {
    const Section g = root.sub("generator", {"users", "meanLogins", "sdLogins", "maxLogins", "desktopFraction",
                                             "homeRegionShare", "start", "end", "poolAddressesPerNetwork",
                                             "features"});
    synth::PopulationConfig p;
    g.read("users", p.users);
    g.read("meanLogins", p.mean_logins);
    g.read("sdLogins", p.sd_logins);
    g.read("maxLogins", p.max_logins);
    g.read("desktopFraction", p.desktop_fraction);
    g.read("homeRegionShare", p.home_region_share);
    g.read("start", p.start);
    g.read("end", p.end);
    g.read("poolAddressesPerNetwork", p.pool_addresses_per_network);
    g.read_list("features", p.features);
    cfg.generator = p;
  }
  if (root.has("dataset")) {
    const Section d = root.sub("dataset", {"path", "lookup", "pool"});
    std::optional<fs::path> path;
    d.read_path("path", path, base);
    if (!path) fail("dataset.path", "required");
    DatasetSource src{*path, std::nullopt, std::nullopt};
    d.read_path("lookup", src.lookup, base);
    d.read_path("pool", src.pool, base);
    cfg.dataset = src;
  }

  if (root.has("engine")) {
    const Section e = root.sub("engine", {"extend", "simple", "weights"});
    if (e.has("extend")) {
      const Section x = e.sub("extend", {"features", "smoothing"});
      x.read_list("features", cfg.engine.extend.features);
      read_smoothing(x, "smoothing", cfg.engine.extend.smoothing);
    }
    if (const json* s = e.find("simple")) {
      if (!s->is_array()) fail("engine.simple", "must be a list");
      cfg.engine.simple.clear();
      for (std::size_t i = 0; i < s->size(); ++i)
        cfg.engine.simple.push_back(simple_from((*s)[i], "engine.simple[" + std::to_string(i) + "]"));
    }
    if (const json* w = e.find("weights")) {
      if (!w->is_object()) fail("engine.weights", "must be an object");
      for (const auto& [name, subs] : w->items()) {
        const std::string at = "engine.weights." + name;
        if (!subs.is_object() || subs.empty()) fail(at, "must map columns to weights");
        std::vector<Subfeature> list;
        for (const auto& [column, weight] : subs.items()) {
          if (!weight.is_number()) fail(at + "." + column, "must be a number");
          list.push_back({column, weight.get<double>()});
        }
        cfg.engine.weights.emplace_back(name, std::move(list));
      }
    }
  }

  if (root.has("attacker")) {
    const Section a = root.sub("attacker", {"models", "pool", "attacksPerUser"});
    if (a.has("models")) {
      std::vector<std::string> names;
      a.read_list("models", names);
      cfg.attacker.models.clear();
      for (std::size_t i = 0; i < names.size(); ++i)
        cfg.attacker.models.push_back(model_from(names[i], "attacker.models[" + std::to_string(i) + "]"));
    }
    a.read_path("pool", cfg.attacker.pool, base);
    a.read("attacksPerUser", cfg.attacker.attacks_per_user);
  }

  if (root.has("evaluation")) {
    const Section v = root.sub("evaluation", {"targetTPRs", "minUsersPerBucket", "reauthHistorySize"});
    v.read_list("targetTPRs", cfg.evaluation.target_tprs);
    v.read("minUsersPerBucket", cfg.evaluation.min_users_per_bucket);
    v.read("reauthHistorySize", cfg.evaluation.reauth_history_size);
  }

  if (root.has("featbench")) {
    const Section f = root.sub("featbench", {"minEntropy", "minUnique", "minRsr", "addonBase", "singleRequiresRaw",
                                             "reauthTPR", "reauthHistorySize", "smoothing", "features"});
    auto& q = cfg.featbench;
    f.read("minEntropy", q.min_entropy);
    f.read("minUnique", q.min_unique);
    f.read("minRsr", q.min_rsr);
    f.read("addonBase", q.addon_base);
    f.read("singleRequiresRaw", q.single_requires_raw);
    f.read("reauthTPR", q.reauth_tpr);
    f.read("reauthHistorySize", q.reauth_history_size);
    read_smoothing(f, "smoothing", q.smoothing);
    f.read_list("features", q.features);
  }

  if (root.has("perfbench")) {
    const Section p = root.sub("perfbench", {"warmup", "runs", "historySizes", "featureCounts", "featureHistorySize",
                                             "users", "candidates", "simpleSlopeBoundMs", "latencyBudgetMs"});
    auto& b = cfg.perfbench;
    p.read("warmup", b.timing.warmup);
    p.read("runs", b.timing.runs);
    p.read_list("historySizes", b.history_sizes);
    p.read_list("featureCounts", b.feature_counts);
    p.read("featureHistorySize", b.feature_history_size);
    p.read("users", b.users);
    p.read_list("candidates", b.candidates);
    p.read("simpleSlopeBoundMs", b.simple_slope_bound_ms);
    p.read("latencyBudgetMs", b.latency_budget_ms);
  }

  if (root.has("service")) {
    const Section s = root.sub("service", {"address", "store", "hashValues", "hashSalt", "defaultEngine",
                                           "thresholdModel", "thresholdTPR"});
    auto& v = cfg.service;
    s.read("address", v.address);
    s.read_path("store", v.store, base);
    s.read("hashValues", v.hash_values);
    s.read("hashSalt", v.hash_salt);
    s.read("defaultEngine", v.default_engine);
    std::string model;
    s.read("thresholdModel", model);
    if (!model.empty()) v.threshold_model = model_from(model, "service.thresholdModel");
    s.read("thresholdTPR", v.threshold_tpr);
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config_invalid, path.string() + ": cannot read config file");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw Error(Errc::config_invalid, path.string() + ": " + e.what());
  }
  RunConfig cfg = parse_run_config(j, path.parent_path());
  return cfg;
}

void RunConfig::validate() const {
  if (generator.has_value() == dataset.has_value())
    fail("generator/dataset", "exactly one of 'generator' and 'dataset' must be given");
  if (generator) {
    try {
      generator->validate();
    } catch (const Error& e) {
      fail("generator", e.what());
    }
  }
  const auto must_exist = [](const std::optional<fs::path>& p, const std::string& field) {
    if (p && !fs::exists(*p)) fail(field, "file " + p->string() + " does not exist");
  };
  if (dataset) {
    must_exist(dataset->dataset, "dataset.path");
    must_exist(dataset->lookup, "dataset.lookup");
    must_exist(dataset->pool, "dataset.pool");
  }
  must_exist(attacker.pool, "attacker.pool");

  FeatureCatalog catalog = FeatureCatalog::builtin();
  for (const auto& [name, subs] : engine.weights) {
    if (!catalog.contains(name)) fail("engine.weights." + name, "unknown feature");
    try {
      catalog.set_subfeatures(name, subs);
    } catch (const Error& e) {
      fail("engine.weights." + name, e.what());
    }
  }
  if (engine.extend.features.empty()) fail("engine.extend.features", "must not be empty");
  try {
    engine.extend.smoothing.validate();
  } catch (const Error& e) {
    fail("engine.extend.smoothing", e.what());
  }
  for (std::size_t i = 0; i < engine.simple.size(); ++i) {
    try {
      engine.simple[i].validate();
    } catch (const Error& e) {
      fail("engine.simple[" + std::to_string(i) + "]", e.what());
    }
  }
  if (attacker.models.empty()) fail("attacker.models", "must not be empty");
  if (attacker.attacks_per_user == 0) fail("attacker.attacksPerUser", "must be positive");
  if (evaluation.target_tprs.empty()) fail("evaluation.targetTPRs", "must not be empty");
  for (std::size_t i = 0; i < evaluation.target_tprs.size(); ++i) {
    const double t = evaluation.target_tprs[i];
    if (!(t > 0.0 && t <= 1.0)) fail("evaluation.targetTPRs[" + std::to_string(i) + "]", "must lie in (0, 1]");
  }
  if (evaluation.reauth_history_size == 0) fail("evaluation.reauthHistorySize", "must be positive");
  if (!(featbench.reauth_tpr > 0.0 && featbench.reauth_tpr <= 1.0)) fail("featbench.reauthTPR", "must lie in (0, 1]");
  if (featbench.reauth_history_size == 0) fail("featbench.reauthHistorySize", "must be positive");
  try {
    featbench.smoothing.validate();
  } catch (const Error& e) {
    fail("featbench.smoothing", e.what());
  }
  if (perfbench.timing.runs < 3) fail("perfbench.runs", "must be at least 3");
  const auto increasing = [](const std::vector<std::size_t>& xs, const std::string& field) {
    if (xs.empty()) fail(field, "must not be empty");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] == 0) fail(field, "values must be positive");
      if (i > 0 && xs[i] <= xs[i - 1]) fail(field, "must be strictly increasing");
    }
  };
  increasing(perfbench.history_sizes, "perfbench.historySizes");
  increasing(perfbench.feature_counts, "perfbench.featureCounts");
  if (perfbench.feature_history_size == 0) fail("perfbench.featureHistorySize", "must be positive");
  if (service.default_engine != "extend" && service.default_engine != "simple")
    fail("service.defaultEngine", "must be 'extend' or 'simple'");
  if (!(service.threshold_tpr > 0.0 && service.threshold_tpr <= 1.0))
    fail("service.thresholdTPR", "must lie in (0, 1]");
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["seed"] = seed;
  j["output"] = output.generic_string();
  if (generator) {
    const auto& p = *generator;
    j["generator"] = {{"users", p.users},
                      {"meanLogins", p.mean_logins},
                      {"sdLogins", p.sd_logins},
                      {"maxLogins", p.max_logins},
                      {"desktopFraction", p.desktop_fraction},
                      {"homeRegionShare", p.home_region_share},
                      {"start", p.start},
                      {"end", p.end},
                      {"poolAddressesPerNetwork", p.pool_addresses_per_network},
                      {"features", p.features}};
  }
  if (dataset) {
    j["dataset"] = {{"path", dataset->dataset.generic_string()},
                    {"lookup", path_json(dataset->lookup)},
                    {"pool", path_json(dataset->pool)}};
  }
  ordered_json simple = ordered_json::array();
  for (const auto& s : engine.simple) {
    ordered_json e{{"variant", std::string(to_string(s.variant))}};
    if (s.variant == SimpleVariant::custom) e["features"] = s.features;
    e["lastLoginWindowDays"] = s.last_login_window_days;
    simple.push_back(std::move(e));
  }
  ordered_json weights = ordered_json::object();
  for (const auto& [name, subs] : engine.weights) {
    ordered_json w = ordered_json::object();
    for (const auto& s : subs) w[s.source] = s.weight;
    weights[name] = std::move(w);
  }
  j["engine"] = {{"extend", {{"features", engine.extend.features}, {"smoothing", smoothing_json(engine.extend.smoothing)}}},
                 {"simple", std::move(simple)},
                 {"weights", std::move(weights)}};
  ordered_json models = ordered_json::array();
  for (auto m : attacker.models) models.push_back(std::string(to_string(m)));
  j["attacker"] = {{"models", std::move(models)},
                   {"pool", path_json(attacker.pool)},
                   {"attacksPerUser", attacker.attacks_per_user}};
  j["evaluation"] = {{"targetTPRs", evaluation.target_tprs},
                     {"minUsersPerBucket", evaluation.min_users_per_bucket},
                     {"reauthHistorySize", evaluation.reauth_history_size}};
  j["featbench"] = {{"minEntropy", featbench.min_entropy},
                    {"minUnique", featbench.min_unique},
                    {"minRsr", featbench.min_rsr},
                    {"addonBase", featbench.addon_base},
                    {"singleRequiresRaw", featbench.single_requires_raw},
                    {"reauthTPR", featbench.reauth_tpr},
                    {"reauthHistorySize", featbench.reauth_history_size},
                    {"smoothing", smoothing_json(featbench.smoothing)},
                    {"features", featbench.features}};
  j["perfbench"] = {{"warmup", perfbench.timing.warmup},
                    {"runs", perfbench.timing.runs},
                    {"historySizes", perfbench.history_sizes},
                    {"featureCounts", perfbench.feature_counts},
                    {"featureHistorySize", perfbench.feature_history_size},
                    {"users", perfbench.users},
                    {"candidates", perfbench.candidates},
                    {"simpleSlopeBoundMs", perfbench.simple_slope_bound_ms},
                    {"latencyBudgetMs", perfbench.latency_budget_ms}};
  j["service"] = {{"address", service.address},
                  {"store", path_json(service.store)},
                  {"hashValues", service.hash_values},
                  {"hashSalt", service.hash_salt},
                  {"defaultEngine", service.default_engine},
                  {"thresholdModel", std::string(to_string(service.threshold_model))},
                  {"thresholdTPR", service.threshold_tpr}};
  return j;
}

}  // namespace riskgate::cli
