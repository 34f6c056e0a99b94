#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "riskgate/core/types.hpp"

namespace riskgate {

class HistoryView;

// Append-only login log with prefix-indexed counts.
//
// Every count index records the ordinals (positions in the log) of the
// legitimate events that contributed to it, so the state after any prefix of
// the log is answered by a binary search instead of a rebuild. Attack events
// are kept in the log but never reach an index.
//
// A feature absent from an event counts as MISSING, so a column that never
// appears has a single value (MISSING) seen on every legitimate login.
//
// Not internally synchronized: use SharedHistory when a writer runs
// concurrently with readers.
class HistoryStore {
 public:
  HistoryStore() = default;

  // Throws OutOfOrderTimestamp when the event is older than the last one,
  // DuplicateEventId when an explicit id repeats.
  void append(LoginEvent event);

  // Read-only state after the first `index` events. Throws IndexOutOfRange.
  HistoryView state_at(std::size_t index) const;
  HistoryView view() const;

  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  const std::vector<LoginEvent>& events() const noexcept { return events_; }
  const LoginEvent& event(std::size_t ordinal) const { return events_.at(ordinal); }

 private:
  friend class HistoryView;

  using Ordinals = std::vector<std::uint32_t>;

  struct FeatureIndex {
    std::unordered_map<FeatureValue, std::uint32_t, FeatureValueHash> ids;
    std::vector<FeatureValue> values;       // by value id
    std::vector<std::uint32_t> first_seen;  // by value id; ascending
    std::vector<Ordinals> hits;             // by value id
    Ordinals present;                       // logins with a non-MISSING value
  };

  struct UserIndex {
    UserId user;
    std::uint32_t first_seen;
    Ordinals logins;
    // key: (feature id << 32) | value id; kPresent stands for any value
    std::unordered_map<std::uint64_t, Ordinals> hits;
  };

  static constexpr std::uint32_t kPresent = 0xffffffffu;

  static std::uint64_t pack(std::uint32_t feature, std::uint32_t value) noexcept {
    return (static_cast<std::uint64_t>(feature) << 32) | value;
  }

  std::optional<std::uint32_t> feature_id(std::string_view name) const;
  std::optional<std::uint32_t> user_id(const UserId& user) const;

  std::vector<LoginEvent> events_;
  std::vector<std::uint32_t> legit_prefix_{0};  // legit events among the first i
  std::unordered_map<std::string, std::uint32_t> feature_ids_;
  std::vector<FeatureIndex> features_;
  std::unordered_map<std::string, std::uint32_t> user_ids_;
  std::vector<UserIndex> users_;  // first_seen ascending
  std::unordered_set<std::string> event_ids_;
};

// Counts as of a fixed prefix of a HistoryStore. Cheap to copy; valid while
// the store is alive and not being appended to concurrently.
class HistoryView {
 public:
  std::size_t index() const noexcept { return index_; }

  // N: legitimate logins in the prefix.
  std::size_t total_logins() const noexcept;
  // |U|: users with at least one legitimate login in the prefix.
  std::size_t user_count() const noexcept;
  // n_u.
  std::size_t user_logins(const UserId& user) const;

  std::size_t global_count(std::string_view feature, const FeatureValue& value) const;
  std::size_t user_value_count(const UserId& user, std::string_view feature,
                               const FeatureValue& value) const;
  // V: distinct values observed for the feature.
  std::size_t distinct_values(std::string_view feature) const;

  std::optional<Timestamp> last_login(const UserId& user) const;
  // Ordinal of the user's most recent legitimate login in the prefix.
  std::optional<std::size_t> last_login_ordinal(const UserId& user) const;

  // Users observed in the prefix, in order of first login.
  std::vector<UserId> users() const;
  // Observed values with positive count, in order of first observation;
  // MISSING (explicit or absent) comes last.
  std::vector<std::pair<FeatureValue, std::size_t>> global_distribution(std::string_view feature) const;
  std::vector<std::pair<FeatureValue, std::size_t>> user_distribution(const UserId& user,
                                                                      std::string_view feature) const;
  // Ordinals of the user's legitimate logins in the prefix.
  std::vector<std::size_t> user_login_ordinals(const UserId& user) const;

  const HistoryStore& store() const noexcept { return *store_; }

 private:
  friend class HistoryStore;
  HistoryView(const HistoryStore* store, std::size_t index) : store_(store), index_(index) {}

  std::size_t count_before(const HistoryStore::Ordinals& ordinals) const noexcept;
  std::size_t missing_count(std::optional<std::uint32_t> fid) const;
  std::size_t user_missing_count(std::uint32_t uid, std::optional<std::uint32_t> fid) const;

  const HistoryStore* store_;
  std::size_t index_;
};

// A HistoryStore behind a reader/writer lock: appends are serialized, any
// number of readers may score concurrently.
class SharedHistory {
 public:
  SharedHistory() = default;
  explicit SharedHistory(HistoryStore store) : store_(std::move(store)) {}

  void append(LoginEvent event) {
    std::unique_lock lock(mutex_);
    store_.append(std::move(event));
  }

  // Runs fn(view) against a consistent snapshot of the current state.
  template <typename Fn>
  auto read(Fn&& fn) const {
    std::shared_lock lock(mutex_);
    return fn(store_.view());
  }

  // Runs fn(store) with exclusive access; fn may append.
  template <typename Fn>
  auto write(Fn&& fn) {
    std::unique_lock lock(mutex_);
    return fn(store_);
  }

 private:
  mutable std::shared_mutex mutex_;
  HistoryStore store_;
};

}  // namespace riskgate
