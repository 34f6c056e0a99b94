#include "riskgate/core/types.hpp"

#include "riskgate/core/errors.hpp"

namespace riskgate {

UserId::UserId(std::string id) : id_(std::move(id)) {
  if (id_.empty()) throw Error(Errc::invalid_argument, "user id must be non-empty");
}

std::string_view to_string(AttackerModel model) noexcept {
  switch (model) {
    case AttackerModel::naive: return "naive";
    case AttackerModel::vpn: return "vpn";
    case AttackerModel::targeted: return "targeted";
  }
  return "naive";
}

AttackerModel parse_attacker_model(std::string_view name) {
  if (name == "naive") return AttackerModel::naive;
  if (name == "vpn") return AttackerModel::vpn;
  if (name == "targeted") return AttackerModel::targeted;
  throw Error(Errc::invalid_argument, "unknown attacker model '" + std::string(name) + "'");
}

std::string to_string(const Label& label) {
  if (label.legitimate()) return "legitimate";
  return "attack:" + std::string(to_string(*label.attack));
}

Label parse_label(std::string_view text) {
  if (text == "legitimate") return Label::legit();
  constexpr std::string_view prefix = "attack:";
  if (text.substr(0, prefix.size()) == prefix) {
    return Label::attack_by(parse_attacker_model(text.substr(prefix.size())));
  }
  throw Error(Errc::invalid_argument, "unknown label '" + std::string(text) + "'");
}

const FeatureValue& LoginEvent::value(std::string_view feature) const {
  static const FeatureValue kMissing;
  auto it = features.find(feature);
  return it == features.end() ? kMissing : it->second;
}

}  // namespace riskgate
