#pragma once

#include <cstddef>
#include <vector>

#include "riskgate/core/history.hpp"
#include "riskgate/engines/verdict.hpp"
#include "riskgate/evalsuite/metrics.hpp"

namespace riskgate {

struct ScoredLogin {
  std::size_t ordinal = 0;       // position in the store's log
  UserId user;
  std::size_t user_ordinal = 0;  // 1 for the user's first login
  double score = 0.0;
};

struct LoginRecord {
  std::size_t ordinal = 0;
  UserId user;
  std::size_t user_ordinal = 0;
  double score = 0.0;
  Decision decision = Decision::grant;

  friend bool operator==(const LoginRecord&, const LoginRecord&) = default;
};

struct ReplayOutcome {
  double threshold = 0.0;
  std::vector<LoginRecord> records;
  std::vector<SizeAggregate> aggregates;  // ascending size, from 1
};

// Scores every legitimate login against the state just before it, which is
// what an incremental replay sees: all earlier legitimate logins of all
// users. Attack events in the log are skipped.
std::vector<ScoredLogin> score_legitimate(const HistoryStore& store, const RiskEngine& engine);

// Decides each scored login at the threshold and aggregates per history
// size: for users with at least s logins, the median number of challenges
// within their first s logins and the median rate.
ReplayOutcome apply_threshold(const std::vector<ScoredLogin>& scored, double threshold);

ReplayOutcome replay(const HistoryStore& store, const RiskEngine& engine, double threshold);

std::vector<SizeAggregate> aggregate_by_size(const std::vector<LoginRecord>& records);

}  // namespace riskgate
