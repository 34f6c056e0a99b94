#include "riskgate/engines/verdict.hpp"

#include <cmath>

#include "riskgate/core/errors.hpp"

namespace riskgate {

std::string_view to_string(Decision decision) noexcept {
  return decision == Decision::challenge ? "challenge" : "grant";
}

Decision decide(double score, double threshold) {
  if (!(threshold >= 0.0)) throw Error(Errc::invalid_argument, "threshold must be >= 0");
  return score >= threshold ? Decision::challenge : Decision::grant;
}

}  // namespace riskgate
