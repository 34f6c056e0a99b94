#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace riskgate {

struct CalibrationResult {
  double threshold = 0.0;
  double target_tpr = 0.0;
  double achieved_tpr = 0.0;
  std::size_t attack_score_count = 0;
};

// Fraction of scores >= threshold.
double true_positive_rate(std::span<const double> attack_scores, double threshold);

// Picks the threshold among the distinct attack scores (and one value just
// above the maximum) whose TPR is nearest to the target; ties go to the
// higher TPR. Throws EmptyScores, or InvalidArgument for a target outside
// (0, 1].
CalibrationResult calibrate(std::span<const double> attack_scores, double target_tpr);

// Every TPR calibrate() can return for these scores, descending.
std::vector<double> achievable_tprs(std::span<const double> attack_scores);

}  // namespace riskgate
