#pragma once

#include <map>
#include <string>
#include <string_view>

#include "riskgate/core/history.hpp"
#include "riskgate/core/types.hpp"

namespace riskgate {

enum class Decision { grant, challenge };

std::string_view to_string(Decision decision) noexcept;

// challenge iff score >= threshold. Throws InvalidArgument for a negative or
// NaN threshold.
Decision decide(double score, double threshold);

struct RiskVerdict {
  double score = 0.0;
  double threshold = 0.0;
  Decision decision = Decision::grant;
  // Per-feature ratio (EXTEND) or match flag (SIMPLE).
  std::map<std::string, double, std::less<>> contributions;

  friend bool operator==(const RiskVerdict&, const RiskVerdict&) = default;
};

class RiskEngine {
 public:
  virtual ~RiskEngine() = default;

  virtual std::string tag() const = 0;
  // Scores `event` for event.user against the history in `view`.
  virtual RiskVerdict score(const HistoryView& view, const LoginEvent& event, double threshold) const = 0;
  // Score only; cheaper when no verdict is needed.
  virtual double risk(const HistoryView& view, const LoginEvent& event) const = 0;
};

}  // namespace riskgate
