#include "riskgate/evalsuite/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riskgate/core/errors.hpp"

namespace riskgate {

namespace {

struct Candidate {
  double threshold;
  double tpr;
};

// Candidates in ascending threshold order (so descending TPR).
std::vector<Candidate> candidates(std::span<const double> scores) {
  if (scores.empty()) throw Error(Errc::empty_scores, "calibration needs at least one attack score");
  std::vector<double> sorted(scores.begin(), scores.end());
  for (double s : sorted) {
    if (std::isnan(s)) throw Error(Errc::invalid_argument, "attack score is NaN");
  }
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;
    out.push_back({sorted[i], static_cast<double>(sorted.size() - i) / n});
  }
  out.push_back({std::nextafter(sorted.back(), std::numeric_limits<double>::infinity()), 0.0});
  return out;
}

}  // namespace

double true_positive_rate(std::span<const double> attack_scores, double threshold) {
  if (attack_scores.empty()) throw Error(Errc::empty_scores, "no attack scores");
  const auto blocked = std::count_if(attack_scores.begin(), attack_scores.end(),
                                     [threshold](double s) { return s >= threshold; });
  return static_cast<double>(blocked) / static_cast<double>(attack_scores.size());
}

CalibrationResult calibrate(std::span<const double> attack_scores, double target_tpr) {
  if (!(target_tpr > 0.0 && target_tpr <= 1.0)) {
    throw Error(Errc::invalid_argument, "target TPR must lie in (0, 1]");
  }
  const auto options = candidates(attack_scores);
  const Candidate* best = &options.front();
  for (const auto& c : options) {
    const double d = std::abs(c.tpr - target_tpr);
    const double best_d = std::abs(best->tpr - target_tpr);
    // Strictly nearer wins; on a tie the earlier (higher TPR) candidate stays.
    if (d < best_d) best = &c;
  }
  return CalibrationResult{best->threshold, target_tpr, true_positive_rate(attack_scores, best->threshold),
                           attack_scores.size()};
}

std::vector<double> achievable_tprs(std::span<const double> attack_scores) {
  std::vector<double> out;
  for (const auto& c : candidates(attack_scores)) out.push_back(c.tpr);
  return out;
}

}  // namespace riskgate
