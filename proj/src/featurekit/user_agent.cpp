#include "riskgate/featurekit/user_agent.hpp"

#include <cctype>

namespace riskgate {

namespace {

bool contains(std::string_view haystack, std::string_view needle) {
  return haystack.find(needle) != std::string_view::npos;
}

// Digits (and separators) following `token` in `ua`, e.g. "70.0.3538.77".
std::optional<std::string> version_after(std::string_view ua, std::string_view token) {
  const auto pos = ua.find(token);
  if (pos == std::string_view::npos) return std::nullopt;
  std::string out;
  for (std::size_t i = pos + token.size(); i < ua.size(); ++i) {
    const char c = ua[i];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '_') {
      out.push_back(c == '_' ? '.' : c);
    } else {
      break;
    }
  }
  while (!out.empty() && out.back() == '.') out.pop_back();
  if (out.empty()) return std::nullopt;
  return out;
}

std::string major(const std::string& version) { return version.substr(0, version.find('.')); }

std::string major_minor(const std::string& version) {
  const auto first = version.find('.');
  if (first == std::string::npos) return version;
  const auto second = version.find('.', first + 1);
  return version.substr(0, second);
}

std::optional<std::string> parse_browser(std::string_view ua) {
  struct Family {
    std::string_view token;
    std::string_view name;
  };
  // Order matters: Edge and mobile variants also advertise Chrome/Safari.
  static constexpr Family kFamilies[] = {
      {"Edge/", "Edge"},  {"Edg/", "Edge"},       {"EdgiOS/", "Edge"}, {"EdgA/", "Edge"},
      {"FxiOS/", "Firefox"}, {"Firefox/", "Firefox"}, {"CriOS/", "Chrome"}, {"Chrome/", "Chrome"},
  };
  for (const auto& family : kFamilies) {
    if (auto v = version_after(ua, family.token)) return std::string(family.name) + " " + major(*v);
  }
  if (contains(ua, "Safari/")) {
    if (auto v = version_after(ua, "Version/")) return "Safari " + major(*v);
    return std::string("Safari");
  }
  return std::nullopt;
}

std::optional<std::string> parse_os(std::string_view ua) {
  if (auto v = version_after(ua, "Windows NT ")) {
    if (*v == "10.0") return std::string("Windows 10");
    if (*v == "6.3") return std::string("Windows 8.1");
    if (*v == "6.2") return std::string("Windows 8");
    if (*v == "6.1") return std::string("Windows 7");
    return "Windows NT " + *v;
  }
  if (contains(ua, "iPhone") || contains(ua, "iPad") || contains(ua, "iPod")) {
    if (auto v = version_after(ua, " OS ")) return "iOS " + major_minor(*v);
    return std::string("iOS");
  }
  if (auto v = version_after(ua, "Android ")) return "Android " + major(*v);
  if (contains(ua, "Android")) return std::string("Android");
  if (auto v = version_after(ua, "Mac OS X ")) return "Mac OS X " + major_minor(*v);
  if (contains(ua, "Macintosh")) return std::string("Mac OS X");
  if (contains(ua, "CrOS")) return std::string("Chrome OS");
  if (contains(ua, "Linux") || contains(ua, "X11")) return std::string("Linux");
  return std::nullopt;
}

}  // namespace

UserAgentInfo parse_user_agent(std::string_view ua) {
  UserAgentInfo info;
  info.browser = parse_browser(ua);
  info.os = parse_os(ua);
  const bool mobile = contains(ua, "Mobile") || contains(ua, "iPhone") || contains(ua, "iPad") ||
                      contains(ua, "iPod") || contains(ua, "Android");
  info.device_type = mobile ? "mobile" : "desktop";
  return info;
}

}  // namespace riskgate
