#include "riskgate/evalsuite/entropy.hpp"

#include <cmath>
#include <unordered_set>
#include <vector>

#include "riskgate/core/errors.hpp"

namespace riskgate {

namespace {

template <typename Pairs>
double entropy_of(const Pairs& distribution) {
  std::vector<std::size_t> counts;
  counts.reserve(distribution.size());
  for (const auto& [value, count] : distribution) counts.push_back(count);
  return shannon_entropy(counts);
}

}  // namespace

double shannon_entropy(std::span<const std::size_t> counts) {
  double total = 0.0;
  for (std::size_t c : counts) total += static_cast<double>(c);
  if (total <= 0.0) throw Error(Errc::empty_distribution, "entropy of an empty distribution");
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  // -0.0 for a single category
  return h == 0.0 ? 0.0 : h;
}

EntropyPair entropy_pair(const HistoryView& view, std::string_view column) {
  EntropyPair out;
  out.global = entropy_of(view.global_distribution(column));
  const auto users = view.users();
  double sum = 0.0;
  for (const auto& u : users) sum += entropy_of(view.user_distribution(u, column));
  out.user_mean = users.empty() ? 0.0 : sum / static_cast<double>(users.size());
  return out;
}

UniqueCounts unique_value_counts(const HistoryView& view, std::string_view column, std::string_view device_column) {
  std::unordered_set<std::string> all, desktop, mobile;
  bool any_device = false;
  const HistoryStore& store = view.store();
  for (std::size_t i = 0; i < view.index(); ++i) {
    const LoginEvent& e = store.event(i);
    if (!e.label.legitimate()) continue;
    const FeatureValue& device = e.value(device_column);
    if (!device.is_missing()) any_device = true;
    const FeatureValue& v = e.value(column);
    if (v.is_missing()) continue;
    all.insert(v.token());
    if (device.token() == "desktop") desktop.insert(v.token());
    if (device.token() == "mobile") mobile.insert(v.token());
  }
  UniqueCounts out;
  out.global = all.size();
  if (any_device) {
    out.desktop = desktop.size();
    out.mobile = mobile.size();
  }
  return out;
}

int dot_scale(std::size_t n) noexcept {
  if (n > 300) return 5;
  if (n >= 150) return 4;
  if (n >= 75) return 3;
  if (n >= 25) return 2;
  if (n >= 10) return 1;
  return 0;
}

std::string render_dots(std::size_t unique_values) {
  const int filled = dot_scale(unique_values);
  std::string out;
  for (int i = 0; i < 5; ++i) out += i < filled ? "●" : "○";
  return out;
}

}  // namespace riskgate
