#pragma once

#include <cstddef>
#include <span>

namespace riskgate {

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double cohen_f = 0.0;  // infinity when r_squared == 1
  double p_value = 1.0;  // F-test of the slope, F(1, n - 2)
  std::size_t n = 0;
};

// sqrt(r2 / (1 - r2)); infinity at r2 == 1. Throws InvalidArgument outside
// [0, 1].
double cohen_f(double r_squared);

// Ordinary least squares y = intercept + slope * x. Throws InsufficientData
// for fewer than 3 points or mismatched lengths, DegenerateX when all x are
// equal. A constant y yields r_squared 0 and p_value 1.
RegressionFit linfit(std::span<const double> xs, std::span<const double> ys);

}  // namespace riskgate
