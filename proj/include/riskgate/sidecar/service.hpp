#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "riskgate/core/history.hpp"
#include "riskgate/core/value_hash.hpp"
#include "riskgate/engines/extend.hpp"
#include "riskgate/engines/simple.hpp"
#include "riskgate/featurekit/ip_lookup.hpp"

namespace riskgate {

struct ScoreRequest {
  UserId user{"_"};
  std::optional<Timestamp> timestamp;  // the service clock when absent
  FeatureMap features;                 // raw columns; derived ones are added
  std::optional<std::string> engine;   // "extend" or "simple"; the default engine when absent
};

struct ScoreResponse {
  RiskVerdict verdict;
  std::string engine;
  friend bool operator==(const ScoreResponse&, const ScoreResponse&) = default;
};

// Body fields: "user", "ts", "features" (string, number or null values) and
// "engine". Throws Error(invalid_argument) on malformed input.
ScoreRequest parse_score_request(std::string_view body);
std::string format_score_request(const ScoreRequest& request);
std::string format_score_response(const ScoreResponse& response);
ScoreResponse parse_score_response(std::string_view body);

struct ServiceConfig {
  FeatureCatalog catalog = FeatureCatalog::builtin();
  ExtendConfig extend = ExtendConfig::baseline();
  SimpleConfig simple = SimpleConfig::ipua();
  double extend_threshold = 0.0;
  double simple_threshold = 0.0;
  std::string default_engine = "extend";
  std::optional<IpLookupTable> lookup;
  // Last-seen values in summaries are hashed with this salt unless disabled.
  bool hash_values = true;
  std::string hash_salt;
  // Journal of recorded logins, replayed at start-up and appended to by
  // record(). Purely in-memory when absent.
  std::optional<std::filesystem::path> store_path;
};

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// The scoring logic behind the HTTP endpoints, usable without a socket.
// Scoring runs under a shared lock against the current state; recording is
// serialized, so recorded logins form a single total order.
class ScoringService {
 public:
  // `history` seeds the store (legitimate logins, enriched or raw). Throws
  // InvalidConfig for an unknown default engine or an invalid engine config,
  // and the journal's errors when it cannot be replayed.
  explicit ScoringService(ServiceConfig config, HistoryStore history = {});

  // Fills in the timestamp and derived columns of a request.
  LoginEvent to_event(const ScoreRequest& request) const;

  // Read-only. Throws InvalidArgument for an unknown engine selector.
  ScoreResponse score(const ScoreRequest& request) const;
  // Scores against the state before the login, then appends it. Throws
  // OutOfOrderTimestamp, or Error(io_error) when the journal write fails (the
  // login is then not recorded).
  ScoreResponse record(const ScoreRequest& request);

  HttpReply handle_score(std::string_view body) const;
  HttpReply handle_record(std::string_view body);
  HttpReply handle_summary(std::string_view user) const;
  HttpReply handle_health() const;

  std::size_t history_size() const;
  const ServiceConfig& config() const noexcept { return config_; }

 private:
  const RiskEngine& engine_for(const std::optional<std::string>& selector, double& threshold) const;
  void open_journal();

  ServiceConfig config_;
  ExtendEngine extend_;
  SimpleEngine simple_;
  ValueHasher hasher_;
  SharedHistory history_;
  std::ofstream journal_;
  bool store_ok_ = true;
};

}  // namespace riskgate
