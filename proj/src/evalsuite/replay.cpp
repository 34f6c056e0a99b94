#include "riskgate/evalsuite/replay.hpp"

#include <map>

namespace riskgate {

std::vector<ScoredLogin> score_legitimate(const HistoryStore& store, const RiskEngine& engine) {
  std::vector<ScoredLogin> out;
  std::map<UserId, std::size_t> seen;
  for (std::size_t i = 0; i < store.size(); ++i) {
    const LoginEvent& e = store.event(i);
    if (!e.label.legitimate()) continue;
    const std::size_t user_ordinal = ++seen[e.user];
    out.push_back(ScoredLogin{i, e.user, user_ordinal, engine.risk(store.state_at(i), e)});
  }
  return out;
}

std::vector<SizeAggregate> aggregate_by_size(const std::vector<LoginRecord>& records) {
  // Challenge flags per user in login order.
  std::map<UserId, std::vector<bool>> per_user;
  std::size_t longest = 0;
  for (const auto& r : records) {
    auto& flags = per_user[r.user];
    flags.push_back(r.decision == Decision::challenge);
    longest = std::max(longest, flags.size());
  }
  std::vector<std::vector<double>> counts(longest + 1);
  for (const auto& [user, flags] : per_user) {
    std::size_t running = 0;
    for (std::size_t s = 1; s <= flags.size(); ++s) {
      if (flags[s - 1]) ++running;
      counts[s].push_back(static_cast<double>(running));
    }
  }
  std::vector<SizeAggregate> out;
  for (std::size_t s = 1; s <= longest; ++s) {
    SizeAggregate a;
    a.size = s;
    a.users = counts[s].size();
    a.median_count = median(counts[s]);
    std::vector<double> rates;
    rates.reserve(counts[s].size());
    for (double c : counts[s]) rates.push_back(c / static_cast<double>(s));
    a.median_rate = median(std::move(rates));
    out.push_back(a);
  }
  return out;
}

ReplayOutcome apply_threshold(const std::vector<ScoredLogin>& scored, double threshold) {
  ReplayOutcome out;
  out.threshold = threshold;
  out.records.reserve(scored.size());
  for (const auto& s : scored) {
    out.records.push_back(LoginRecord{s.ordinal, s.user, s.user_ordinal, s.score, decide(s.score, threshold)});
  }
  out.aggregates = aggregate_by_size(out.records);
  return out;
}

ReplayOutcome replay(const HistoryStore& store, const RiskEngine& engine, double threshold) {
  return apply_threshold(score_legitimate(store, engine), threshold);
}

}  // namespace riskgate
