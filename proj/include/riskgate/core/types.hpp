#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace riskgate {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

class UserId {
 public:
  // Throws Error(invalid_argument) on an empty id.
  explicit UserId(std::string id);

  const std::string& str() const noexcept { return id_; }

  friend bool operator==(const UserId&, const UserId&) = default;
  friend auto operator<=>(const UserId&, const UserId&) = default;

 private:
  std::string id_;
};

// Opaque categorical token. A default-constructed value is MISSING.
//
// Two MISSING values compare equal as categories (so MISSING can be counted
// like any other value), but matches() never reports a match involving
// MISSING.
class FeatureValue {
 public:
  FeatureValue() = default;
  explicit FeatureValue(std::string token) : token_(std::move(token)), missing_(false) {}

  static FeatureValue missing() { return FeatureValue(); }

  bool is_missing() const noexcept { return missing_; }
  // Empty for MISSING.
  const std::string& token() const noexcept { return token_; }

  bool matches(const FeatureValue& other) const noexcept {
    return !missing_ && !other.missing_ && token_ == other.token_;
  }

  friend bool operator==(const FeatureValue&, const FeatureValue&) = default;
  friend auto operator<=>(const FeatureValue&, const FeatureValue&) = default;

 private:
  std::string token_;
  bool missing_ = true;
};

struct FeatureValueHash {
  std::size_t operator()(const FeatureValue& v) const noexcept {
    return v.is_missing() ? 0x9e3779b97f4a7c15ULL : std::hash<std::string>{}(v.token());
  }
};

using FeatureMap = std::map<std::string, FeatureValue, std::less<>>;

enum class AttackerModel { naive, vpn, targeted };

std::string_view to_string(AttackerModel model) noexcept;
// Throws Error(invalid_argument) for unknown names.
AttackerModel parse_attacker_model(std::string_view name);

struct Label {
  // nullopt means a legitimate login.
  std::optional<AttackerModel> attack;

  bool legitimate() const noexcept { return !attack.has_value(); }

  static Label legit() { return Label{}; }
  static Label attack_by(AttackerModel model) { return Label{model}; }

  friend bool operator==(const Label&, const Label&) = default;
};

// "legitimate" or "attack:<model>".
std::string to_string(const Label& label);
Label parse_label(std::string_view text);

struct LoginEvent {
  std::optional<std::string> id;
  UserId user;
  Timestamp timestamp = 0;
  FeatureMap features;
  Label label;

  // MISSING when the feature is absent.
  const FeatureValue& value(std::string_view feature) const;

  friend bool operator==(const LoginEvent&, const LoginEvent&) = default;
};

}  // namespace riskgate
