#include "riskgate/core/history.hpp"

#include <algorithm>
#include <limits>

#include "riskgate/core/errors.hpp"

namespace riskgate {

void HistoryStore::append(LoginEvent event) {
  if (!events_.empty() && event.timestamp < events_.back().timestamp) {
    throw Error(Errc::out_of_order_timestamp,
                "event at " + std::to_string(event.timestamp) + " precedes last stored event at " +
                    std::to_string(events_.back().timestamp));
  }
  if (event.id && event_ids_.contains(*event.id)) {
    throw Error(Errc::duplicate_event_id, "event id '" + *event.id + "' already stored");
  }
  if (events_.size() >= std::numeric_limits<std::uint32_t>::max() - 1) {
    throw Error(Errc::invalid_argument, "history store is full");
  }

  const auto ordinal = static_cast<std::uint32_t>(events_.size());
  const bool legit = event.label.legitimate();

  if (legit) {
    auto [uit, new_user] = user_ids_.try_emplace(event.user.str(), static_cast<std::uint32_t>(users_.size()));
    if (new_user) users_.push_back(UserIndex{event.user, ordinal, {}, {}});
    UserIndex& user = users_[uit->second];
    user.logins.push_back(ordinal);

    for (const auto& [name, value] : event.features) {
      auto [fit, new_feature] = feature_ids_.try_emplace(name, static_cast<std::uint32_t>(features_.size()));
      if (new_feature) features_.emplace_back();
      if (value.is_missing()) continue;  // derived from the complement
      FeatureIndex& feature = features_[fit->second];
      feature.present.push_back(ordinal);
      user.hits[pack(fit->second, kPresent)].push_back(ordinal);

      auto [vit, new_value] = feature.ids.try_emplace(value, static_cast<std::uint32_t>(feature.values.size()));
      if (new_value) {
        feature.values.push_back(value);
        feature.first_seen.push_back(ordinal);
        feature.hits.emplace_back();
      }
      feature.hits[vit->second].push_back(ordinal);
      user.hits[pack(fit->second, vit->second)].push_back(ordinal);
    }
  }

  if (event.id) event_ids_.insert(*event.id);
  events_.push_back(std::move(event));
  legit_prefix_.push_back(legit_prefix_.back() + (legit ? 1 : 0));
}

HistoryView HistoryStore::state_at(std::size_t index) const {
  if (index > events_.size()) {
    throw Error(Errc::index_out_of_range,
                "index " + std::to_string(index) + " exceeds log length " + std::to_string(events_.size()));
  }
  return HistoryView(this, index);
}

HistoryView HistoryStore::view() const { return HistoryView(this, events_.size()); }

std::optional<std::uint32_t> HistoryStore::feature_id(std::string_view name) const {
  // Heterogeneous lookup on unordered_map needs C++20 transparent hashing;
  // a temporary string keeps this portable.
  auto it = feature_ids_.find(std::string(name));
  if (it == feature_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> HistoryStore::user_id(const UserId& user) const {
  auto it = user_ids_.find(user.str());
  if (it == user_ids_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------

std::size_t HistoryView::count_before(const HistoryStore::Ordinals& ordinals) const noexcept {
  return static_cast<std::size_t>(
      std::lower_bound(ordinals.begin(), ordinals.end(), static_cast<std::uint32_t>(index_)) - ordinals.begin());
}

std::size_t HistoryView::total_logins() const noexcept { return store_->legit_prefix_[index_]; }

std::size_t HistoryView::user_count() const noexcept {
  const auto& users = store_->users_;
  auto it = std::lower_bound(users.begin(), users.end(), static_cast<std::uint32_t>(index_),
                             [](const HistoryStore::UserIndex& u, std::uint32_t idx) { return u.first_seen < idx; });
  return static_cast<std::size_t>(it - users.begin());
}

std::size_t HistoryView::user_logins(const UserId& user) const {
  auto uid = store_->user_id(user);
  if (!uid) return 0;
  return count_before(store_->users_[*uid].logins);
}

std::size_t HistoryView::missing_count(std::optional<std::uint32_t> fid) const {
  if (!fid) return total_logins();
  return total_logins() - count_before(store_->features_[*fid].present);
}

std::size_t HistoryView::user_missing_count(std::uint32_t uid, std::optional<std::uint32_t> fid) const {
  const auto& user = store_->users_[uid];
  const std::size_t logins = count_before(user.logins);
  if (!fid) return logins;
  auto hit = user.hits.find(HistoryStore::pack(*fid, HistoryStore::kPresent));
  return logins - (hit == user.hits.end() ? 0 : count_before(hit->second));
}

std::size_t HistoryView::global_count(std::string_view feature, const FeatureValue& value) const {
  auto fid = store_->feature_id(feature);
  if (value.is_missing()) return missing_count(fid);
  if (!fid) return 0;
  const auto& index = store_->features_[*fid];
  auto vit = index.ids.find(value);
  if (vit == index.ids.end()) return 0;
  return count_before(index.hits[vit->second]);
}

std::size_t HistoryView::user_value_count(const UserId& user, std::string_view feature,
                                          const FeatureValue& value) const {
  auto uid = store_->user_id(user);
  if (!uid) return 0;
  auto fid = store_->feature_id(feature);
  if (value.is_missing()) return user_missing_count(*uid, fid);
  if (!fid) return 0;
  const auto& index = store_->features_[*fid];
  auto vit = index.ids.find(value);
  if (vit == index.ids.end()) return 0;
  const auto& hits = store_->users_[*uid].hits;
  auto hit = hits.find(HistoryStore::pack(*fid, vit->second));
  if (hit == hits.end()) return 0;
  return count_before(hit->second);
}

std::size_t HistoryView::distinct_values(std::string_view feature) const {
  auto fid = store_->feature_id(feature);
  const std::size_t missing = missing_count(fid) > 0 ? 1 : 0;
  if (!fid) return missing;
  return count_before(store_->features_[*fid].first_seen) + missing;
}

std::optional<std::size_t> HistoryView::last_login_ordinal(const UserId& user) const {
  auto uid = store_->user_id(user);
  if (!uid) return std::nullopt;
  const auto& logins = store_->users_[*uid].logins;
  const std::size_t n = count_before(logins);
  if (n == 0) return std::nullopt;
  return logins[n - 1];
}

std::optional<Timestamp> HistoryView::last_login(const UserId& user) const {
  auto ordinal = last_login_ordinal(user);
  if (!ordinal) return std::nullopt;
  return store_->events_[*ordinal].timestamp;
}

std::vector<UserId> HistoryView::users() const {
  std::vector<UserId> out;
  const std::size_t n = user_count();
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(store_->users_[i].user);
  return out;
}

std::vector<std::pair<FeatureValue, std::size_t>> HistoryView::global_distribution(std::string_view feature) const {
  std::vector<std::pair<FeatureValue, std::size_t>> out;
  auto fid = store_->feature_id(feature);
  if (fid) {
    const auto& index = store_->features_[*fid];
    const std::size_t distinct = count_before(index.first_seen);
    out.reserve(distinct + 1);
    for (std::size_t v = 0; v < distinct; ++v) out.emplace_back(index.values[v], count_before(index.hits[v]));
  }
  if (const std::size_t missing = missing_count(fid); missing > 0) out.emplace_back(FeatureValue(), missing);
  return out;
}

std::vector<std::pair<FeatureValue, std::size_t>> HistoryView::user_distribution(const UserId& user,
                                                                                 std::string_view feature) const {
  std::vector<std::pair<FeatureValue, std::size_t>> out;
  auto uid = store_->user_id(user);
  if (!uid) return out;
  auto fid = store_->feature_id(feature);
  if (fid) {
    const auto& index = store_->features_[*fid];
    std::vector<std::pair<std::uint32_t, std::size_t>> by_id;
    for (const auto& [key, ordinals] : store_->users_[*uid].hits) {
      if ((key >> 32) != *fid) continue;
      const auto vid = static_cast<std::uint32_t>(key & 0xffffffffu);
      if (vid == HistoryStore::kPresent) continue;
      const std::size_t n = count_before(ordinals);
      if (n > 0) by_id.emplace_back(vid, n);
    }
    std::sort(by_id.begin(), by_id.end());
    out.reserve(by_id.size() + 1);
    for (const auto& [vid, n] : by_id) out.emplace_back(index.values[vid], n);
  }
  if (const std::size_t missing = user_missing_count(*uid, fid); missing > 0) out.emplace_back(FeatureValue(), missing);
  return out;
}

std::vector<std::size_t> HistoryView::user_login_ordinals(const UserId& user) const {
  std::vector<std::size_t> out;
  auto uid = store_->user_id(user);
  if (!uid) return out;
  const auto& logins = store_->users_[*uid].logins;
  const std::size_t n = count_before(logins);
  out.assign(logins.begin(), logins.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

}  // namespace riskgate
