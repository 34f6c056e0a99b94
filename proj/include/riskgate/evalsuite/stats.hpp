#pragma once

#include <cstddef>
#include <vector>

namespace riskgate {

struct KruskalWallisResult {
  double h = 0.0;
  double p = 1.0;
  std::size_t df = 0;
};

// Rank-based H with tie correction and a chi-square approximation on k-1
// degrees of freedom. When every value is identical H = 0 and p = 1.
// Throws InvalidArgument for fewer than two groups or an empty group.
KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

// raw_p * comparisons, clipped to 1.
double bonferroni(double raw_p, std::size_t comparisons);

// Dunn's pairwise z-tests on the pooled ranks (tie-corrected), two-sided p
// multiplied by k(k-1)/2 and clipped to 1. Returns a symmetric k x k matrix
// with ones on the diagonal.
std::vector<std::vector<double>> dunn_bonferroni(const std::vector<std::vector<double>>& groups);

// Dunn z statistic matrix (row minus column mean rank), unadjusted.
std::vector<std::vector<double>> dunn_z(const std::vector<std::vector<double>>& groups);

}  // namespace riskgate
