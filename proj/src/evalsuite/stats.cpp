#include "riskgate/evalsuite/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "riskgate/core/errors.hpp"

namespace riskgate {

namespace {

struct Ranked {
  std::vector<double> mean_rank;  // per group
  std::vector<std::size_t> sizes;
  std::size_t n = 0;
  double tie_sum = 0.0;  // sum of t^3 - t over tie groups
};

Ranked rank_groups(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw Error(Errc::invalid_argument, "need at least two groups");
  struct Item {
    double value;
    std::size_t group;
  };
  std::vector<Item> items;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw Error(Errc::invalid_argument, "group " + std::to_string(g) + " is empty");
    for (double v : groups[g]) {
      if (std::isnan(v)) throw Error(Errc::invalid_argument, "NaN in group " + std::to_string(g));
      items.push_back({v, g});
    }
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.value < b.value; });

  Ranked r;
  r.n = items.size();
  r.sizes.assign(groups.size(), 0);
  std::vector<double> rank_sum(groups.size(), 0.0);
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    while (j < items.size() && items[j].value == items[i].value) ++j;
    const double average = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    const auto t = static_cast<double>(j - i);
    r.tie_sum += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) rank_sum[items[k].group] += average;
    i = j;
  }
  for (std::size_t g = 0; g < groups.size(); ++g) r.sizes[g] = groups[g].size();
  r.mean_rank.resize(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) r.mean_rank[g] = rank_sum[g] / static_cast<double>(r.sizes[g]);
  return r;
}

}  // namespace

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  const Ranked r = rank_groups(groups);
  KruskalWallisResult out;
  out.df = groups.size() - 1;
  const auto n = static_cast<double>(r.n);
  const double correction = 1.0 - r.tie_sum / (n * n * n - n);
  if (correction <= 0.0) return out;  // every value identical

  double sum = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double rank_total = r.mean_rank[g] * static_cast<double>(r.sizes[g]);
    sum += rank_total * rank_total / static_cast<double>(r.sizes[g]);
  }
  out.h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction;
  if (out.h < 0.0) out.h = 0.0;
  const boost::math::chi_squared chi2(static_cast<double>(out.df));
  out.p = boost::math::cdf(boost::math::complement(chi2, out.h));
  return out;
}

std::vector<std::vector<double>> dunn_z(const std::vector<std::vector<double>>& groups) {
  const Ranked r = rank_groups(groups);
  const std::size_t k = groups.size();
  const auto n = static_cast<double>(r.n);
  const double variance = n * (n + 1.0) / 12.0 - r.tie_sum / (12.0 * (n - 1.0));
  std::vector<std::vector<double>> z(k, std::vector<double>(k, 0.0));
  if (variance <= 0.0) return z;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double se = std::sqrt(variance * (1.0 / static_cast<double>(r.sizes[i]) +
                                              1.0 / static_cast<double>(r.sizes[j])));
      z[i][j] = (r.mean_rank[i] - r.mean_rank[j]) / se;
    }
  }
  return z;
}

double bonferroni(double raw_p, std::size_t comparisons) {
  return std::min(1.0, raw_p * static_cast<double>(comparisons));
}

std::vector<std::vector<double>> dunn_bonferroni(const std::vector<std::vector<double>>& groups) {
  const auto z = dunn_z(groups);
  const std::size_t k = groups.size();
  const std::size_t comparisons = k * (k - 1) / 2;
  std::vector<std::vector<double>> p(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double raw = std::erfc(std::abs(z[i][j]) / std::sqrt(2.0));
      p[i][j] = bonferroni(raw, comparisons);
    }
  }
  return p;
}

}  // namespace riskgate
