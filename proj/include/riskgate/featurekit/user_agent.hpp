#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace riskgate {

struct UserAgentInfo {
  std::optional<std::string> browser;  // "Chrome 70"
  std::optional<std::string> os;       // "Windows 10", "iOS 12.1"
  std::string device_type;             // "mobile" or "desktop"
};

// Pattern-based parser for the common families: Edge, Chrome, Firefox and
// Safari on Windows, macOS, Linux, iOS and Android. Unrecognized parts stay
// empty.
UserAgentInfo parse_user_agent(std::string_view ua);

}  // namespace riskgate
