#include "riskgate/sidecar/service.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

#include "riskgate/core/errors.hpp"
#include "riskgate/featurekit/derive.hpp"

namespace riskgate {

namespace {

using json = nlohmann::json;

json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

double read_number(const json& v, const char* field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw Error(Errc::invalid_argument, std::string("field '") + field + "' must be a number");
}

HttpReply error_reply(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

int status_for(Errc code) {
  switch (code) {
    case Errc::out_of_order_timestamp:
    case Errc::duplicate_event_id:
      return 409;
    case Errc::io_error:
      return 503;
    default:
      return 400;
  }
}

FeatureCatalog usable_catalog(FeatureCatalog catalog, bool has_lookup) {
  if (has_lookup) return catalog;
  // Without a table the ip rule cannot run; its columns stay MISSING.
  std::vector<std::string> rules;
  for (const auto& r : catalog.derivations())
    if (r != rules::ip) rules.push_back(r);
  catalog.set_derivations(std::move(rules));
  return catalog;
}

Timestamp now_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

ScoreRequest parse_score_request(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::invalid_argument, "request body must be an object");
  const auto user = j.find("user");
  if (user == j.end() || !user->is_string() || user->get_ref<const std::string&>().empty())
    throw Error(Errc::invalid_argument, "field 'user' must be a non-empty string");
  ScoreRequest req{UserId(user->get<std::string>()), std::nullopt, {}, std::nullopt};
  if (const auto ts = j.find("ts"); ts != j.end() && !ts->is_null()) {
    if (!ts->is_number_integer()) throw Error(Errc::invalid_argument, "field 'ts' must be an integer");
    req.timestamp = ts->get<Timestamp>();
  }
  if (const auto f = j.find("features"); f != j.end()) {
    if (!f->is_object()) throw Error(Errc::invalid_argument, "field 'features' must be an object");
    for (const auto& [name, value] : f->items()) {
      if (value.is_null()) {
        req.features[name] = FeatureValue::missing();
      } else if (value.is_string()) {
        req.features[name] = FeatureValue(value.get<std::string>());
      } else if (value.is_number() || value.is_boolean()) {
        req.features[name] = FeatureValue(value.dump());
      } else {
        throw Error(Errc::invalid_argument, "feature '" + name + "' must be a string, number or null");
      }
    }
  }
  if (const auto e = j.find("engine"); e != j.end() && !e->is_null()) {
    if (!e->is_string()) throw Error(Errc::invalid_argument, "field 'engine' must be a string");
    req.engine = e->get<std::string>();
  }
  return req;
}

std::string format_score_request(const ScoreRequest& request) {
  json j;
  j["user"] = request.user.str();
  if (request.timestamp) j["ts"] = *request.timestamp;
  json features = json::object();
  for (const auto& [name, value] : request.features)
    features[name] = value.is_missing() ? json(nullptr) : json(value.token());
  j["features"] = std::move(features);
  if (request.engine) j["engine"] = *request.engine;
  return j.dump();
}

std::string format_score_response(const ScoreResponse& response) {
  json contributions = json::object();
  for (const auto& [name, value] : response.verdict.contributions) contributions[name] = number_or_string(value);
  json j{{"score", number_or_string(response.verdict.score)},
         {"decision", std::string(to_string(response.verdict.decision))},
         {"threshold", number_or_string(response.verdict.threshold)},
         {"contributions", std::move(contributions)},
         {"engine", response.engine}};
  return j.dump();
}

ScoreResponse parse_score_response(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("malformed JSON: ") + e.what());
  }
  ScoreResponse r;
  try {
    r.verdict.score = read_number(j.at("score"), "score");
    r.verdict.threshold = read_number(j.at("threshold"), "threshold");
    const auto& d = j.at("decision").get_ref<const std::string&>();
    if (d != "grant" && d != "challenge") throw Error(Errc::invalid_argument, "unknown decision '" + d + "'");
    r.verdict.decision = d == "challenge" ? Decision::challenge : Decision::grant;
    for (const auto& [name, value] : j.at("contributions").items())
      r.verdict.contributions[name] = read_number(value, "contributions");
    r.engine = j.at("engine").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("malformed response: ") + e.what());
  }
  return r;
}

ScoringService::ScoringService(ServiceConfig config, HistoryStore history)
    : config_(std::move(config)),
      extend_(usable_catalog(config_.catalog, config_.lookup.has_value()), config_.extend),
      simple_(config_.simple),
      hasher_(config_.hash_salt),
      history_(std::move(history)) {
  config_.catalog = usable_catalog(std::move(config_.catalog), config_.lookup.has_value());
  if (config_.default_engine != "extend" && config_.default_engine != "simple")
    throw Error(Errc::invalid_config, "default engine must be 'extend' or 'simple', got '" + config_.default_engine + "'");
  decide(0.0, config_.extend_threshold);
  decide(0.0, config_.simple_threshold);
  if (config_.store_path) open_journal();
}

void ScoringService::open_journal() {
  const auto& path = *config_.store_path;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read store " + path.string());
    std::string line;
    std::size_t row = 0;
    history_.write([&](HistoryStore& store) {
      while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        try {
          store.append(to_event(parse_score_request(line)));
        } catch (const Error& e) {
          throw Error(Errc::schema_mismatch, "store " + path.string() + ": " + e.what(), row);
        }
      }
      return 0;
    });
  }
  journal_.open(path, std::ios::app);
  store_ok_ = static_cast<bool>(journal_);
}

LoginEvent ScoringService::to_event(const ScoreRequest& request) const {
  LoginEvent e{std::nullopt, request.user, request.timestamp.value_or(now_seconds()), request.features, Label::legit()};
  enrich(e, config_.catalog, config_.lookup ? &*config_.lookup : nullptr);
  return e;
}

const RiskEngine& ScoringService::engine_for(const std::optional<std::string>& selector, double& threshold) const {
  const std::string& name = selector.value_or(config_.default_engine);
  if (name == "extend") {
    threshold = config_.extend_threshold;
    return extend_;
  }
  if (name == "simple") {
    threshold = config_.simple_threshold;
    return simple_;
  }
  throw Error(Errc::invalid_argument, "unknown engine '" + name + "'");
}

ScoreResponse ScoringService::score(const ScoreRequest& request) const {
  double threshold = 0.0;
  const RiskEngine& engine = engine_for(request.engine, threshold);
  const LoginEvent event = to_event(request);
  return history_.read([&](const HistoryView& view) {
    return ScoreResponse{engine.score(view, event, threshold), engine.tag()};
  });
}

ScoreResponse ScoringService::record(const ScoreRequest& request) {
  double threshold = 0.0;
  const RiskEngine& engine = engine_for(request.engine, threshold);
  ScoreRequest stamped = request;
  if (!stamped.timestamp) stamped.timestamp = now_seconds();
  LoginEvent event = to_event(stamped);
  return history_.write([&](HistoryStore& store) {
    if (!store.empty() && event.timestamp < store.events().back().timestamp)
      throw Error(Errc::out_of_order_timestamp, "login at " + std::to_string(event.timestamp) +
                                                    " is older than the last recorded login at " +
                                                    std::to_string(store.events().back().timestamp));
    ScoreResponse response{engine.score(store.view(), event, threshold), engine.tag()};
    if (config_.store_path) {
      if (!store_ok_) throw Error(Errc::io_error, "store " + config_.store_path->string() + " is unavailable");
      stamped.engine.reset();
      journal_ << format_score_request(stamped) << '\n';
      journal_.flush();
      if (!journal_) {
        store_ok_ = false;
        throw Error(Errc::io_error, "writing to store " + config_.store_path->string() + " failed");
      }
    }
    store.append(std::move(event));
    return response;
  });
}

HttpReply ScoringService::handle_score(std::string_view body) const {
  try {
    return {200, format_score_response(score(parse_score_request(body)))};
  } catch (const Error& e) {
    return error_reply(status_for(e.code()), e.what());
  }
}

HttpReply ScoringService::handle_record(std::string_view body) {
  try {
    return {200, format_score_response(record(parse_score_request(body)))};
  } catch (const Error& e) {
    return error_reply(status_for(e.code()), e.what());
  }
}

HttpReply ScoringService::handle_summary(std::string_view user_text) const {
  if (user_text.empty()) return error_reply(400, "empty user id");
  const UserId user{std::string(user_text)};
  return history_.read([&](const HistoryView& view) -> HttpReply {
    const auto last = view.last_login_ordinal(user);
    if (!last) return error_reply(404, "unknown user '" + user.str() + "'");
    json seen = json::object();
    for (const auto& [name, value] : view.store().event(*last).features) {
      const FeatureValue shown = config_.hash_values ? hasher_.hash(value) : value;
      seen[name] = shown.is_missing() ? json(nullptr) : json(shown.token());
    }
    json j{{"user", user.str()},
           {"historySize", view.user_logins(user)},
           {"lastLogin", *view.last_login(user)},
           {"valuesHashed", config_.hash_values},
           {"lastSeen", std::move(seen)}};
    return {200, j.dump()};
  });
}

HttpReply ScoringService::handle_health() const {
  return history_.read([&](const HistoryView& view) -> HttpReply {
    json j{{"status", store_ok_ ? "ok" : "degraded"},
           {"historySize", view.total_logins()},
           {"users", view.user_count()},
           {"defaultEngine", config_.default_engine},
           {"engines", {"extend", "simple"}}};
    return {store_ok_ ? 200 : 503, j.dump()};
  });
}

std::size_t ScoringService::history_size() const {
  return history_.read([](const HistoryView& view) { return view.total_logins(); });
}

}  // namespace riskgate
