#pragma once

#include <string>

#include "riskgate/core/types.hpp"

namespace riskgate {

// Equality-preserving one-way transform for stored feature values
// (salted SHA-256, hex, truncated to 128 bits). MISSING stays MISSING.
class ValueHasher {
 public:
  explicit ValueHasher(std::string salt = {}) : salt_(std::move(salt)) {}

  FeatureValue hash(const FeatureValue& value) const;
  void apply(FeatureMap& features) const;
  void apply(LoginEvent& event) const { apply(event.features); }

 private:
  std::string salt_;
};

}  // namespace riskgate
