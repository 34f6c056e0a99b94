#include "riskgate/cli/report.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "riskgate/core/errors.hpp"

namespace riskgate::cli {

namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

std::string opt_size(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : ""; }

ordered_json rsr_json(const RsrResult& r) {
  return {{"basic", r.basic}, {"baseline", r.baseline}, {"normalized", r.normalized}};
}

RsrResult rsr_from(const json& j) {
  return {j.at("basic").get<double>(), j.at("baseline").get<double>(), j.at("normalized").get<double>()};
}

FeatureCategory category_from(const std::string& s) {
  for (auto c : {FeatureCategory::single, FeatureCategory::major_addon, FeatureCategory::addon,
                 FeatureCategory::rejected})
    if (to_string(c) == s) return c;
  throw Error(Errc::schema_mismatch, "unknown feature category '" + s + "'");
}

std::string fixed(double v, int digits) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  return fmt::format("{:.{}f}", v, digits);
}

std::string reauth_text(const std::optional<double>& v) {
  if (!v) return "n/a";
  return std::isfinite(*v) ? fixed(*v, 2) : "inf";
}

// Pads by code points so the dot glyphs line up.
std::string pad(const std::string& s, std::size_t width, bool right = false) {
  std::size_t points = 0;
  for (unsigned char c : s)
    if ((c & 0xc0) != 0x80) ++points;
  if (points >= width) return s;
  const std::string fill(width - points, ' ');
  return right ? fill + s : s + fill;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{}", value);
}

double parse_double(std::string_view text) {
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  if (text == "nan") return NAN;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(Errc::schema_mismatch, "not a number: '" + std::string(text) + "'");
  return v;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    const auto& f = fields[i];
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
      out += f;
      continue;
    }
    out.push_back('"');
    for (char c : f) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    out.push_back('"');
  }
  return out;
}

std::vector<std::string> parse_csv_row(std::string_view line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back().push_back(c);
    }
  }
  if (quoted) throw Error(Errc::schema_mismatch, "unterminated quote in delimited row");
  return out;
}

std::vector<std::string> reauth_csv_header() {
  return {"engine", "model", "target_tpr", "achieved_tpr", "threshold", "history_size", "users", "median_count",
          "logins_until_reauth", "required_history_size"};
}

std::vector<std::string> reauth_csv_fields(const ReauthRow& r) {
  return {r.engine,
          r.model,
          format_double(r.target_tpr),
          format_double(r.achieved_tpr),
          format_double(r.threshold),
          std::to_string(r.history_size),
          std::to_string(r.users),
          format_double(r.median_count),
          format_double(r.logins_until_reauth),
          opt_size(r.required_history_size)};
}

std::string render_reauth_table(const std::vector<ReauthRow>& rows, std::string_view model) {
  std::string out = fmt::format("Median logins until re-authentication ({} attackers)\n", model);
  std::size_t size = 0;
  for (const auto& r : rows)
    if (r.model == model) size = r.history_size;
  out += fmt::format("Login history size: {}\n\n", size);
  out += fmt::format("{:<14} {:>10} {:>10} {:>14} {:>10}\n", "Model", "Target", "TPR", "Logins/reauth",
                     "Req. size");
  std::string last_engine;
  for (const auto& r : rows) {
    if (r.model != model) continue;
    const std::string engine = r.engine == last_engine ? "" : r.engine;
    last_engine = r.engine;
    const std::string reauth = std::isfinite(r.logins_until_reauth) ? fixed(r.logins_until_reauth, 2) : "inf";
    const std::string req = r.required_history_size ? std::to_string(*r.required_history_size) : "-";
    out += fmt::format("{:<14} {:>10} {:>10} {:>14} {:>10}\n", engine, fixed(r.target_tpr, 4),
                       fixed(r.achieved_tpr, 4), reauth, req);
  }
  return out;
}

ordered_json feature_row_json(const FeatureBenchmarkRow& r) {
  ordered_json unique{{"global", r.unique.global}};
  unique["desktop"] = r.unique.desktop ? ordered_json(*r.unique.desktop) : ordered_json(nullptr);
  unique["mobile"] = r.unique.mobile ? ordered_json(*r.unique.mobile) : ordered_json(nullptr);
  ordered_json j;
  j["feature"] = r.feature;
  j["category"] = std::string(to_string(r.category));
  j["serverSide"] = r.labels.server_side;
  j["scriptFree"] = r.labels.script_free;
  j["entropy"] = {{"global", r.entropy.global}, {"userMean", r.entropy.user_mean}};
  j["unique"] = std::move(unique);
  j["single"] = rsr_json(r.single);
  j["addon"] = rsr_json(r.addon);
  if (r.logins_until_reauth && std::isfinite(*r.logins_until_reauth))
    j["loginsUntilReauth"] = *r.logins_until_reauth;
  else
    j["loginsUntilReauth"] = r.logins_until_reauth ? ordered_json("inf") : ordered_json(nullptr);
  j["passA"] = r.pass_a;
  j["passB"] = r.pass_b;
  j["passC"] = r.pass_c;
  return j;
}

FeatureBenchmarkRow feature_row_from_json(const json& j) {
  FeatureBenchmarkRow r;
  try {
    r.feature = j.at("feature").get<std::string>();
    r.category = category_from(j.at("category").get<std::string>());
    r.labels = {j.at("serverSide").get<bool>(), j.at("scriptFree").get<bool>()};
    r.entropy = {j.at("entropy").at("global").get<double>(), j.at("entropy").at("userMean").get<double>()};
    const auto& u = j.at("unique");
    r.unique.global = u.at("global").get<std::size_t>();
    if (!u.at("desktop").is_null()) r.unique.desktop = u.at("desktop").get<std::size_t>();
    if (!u.at("mobile").is_null()) r.unique.mobile = u.at("mobile").get<std::size_t>();
    r.single = rsr_from(j.at("single"));
    r.addon = rsr_from(j.at("addon"));
    const auto& l = j.at("loginsUntilReauth");
    if (l.is_string()) r.logins_until_reauth = parse_double(l.get<std::string>());
    else if (!l.is_null()) r.logins_until_reauth = l.get<double>();
    r.pass_a = j.at("passA").get<bool>();
    r.pass_b = j.at("passB").get<bool>();
    r.pass_c = j.at("passC").get<bool>();
  } catch (const json::exception& e) {
    throw Error(Errc::schema_mismatch, std::string("malformed feature row: ") + e.what());
  }
  return r;
}

std::vector<std::string> feature_csv_header() {
  return {"feature",       "script_free",     "rsr",           "h_global",     "h_user_mean",
          "unique_values", "unique_dots",     "logins_until_reauth", "category", "server_side",
          "unique_desktop", "unique_mobile",  "rsr_single",    "rsr_single_baseline", "rsr_addon",
          "rsr_addon_baseline", "pass_a",     "pass_b",        "pass_c"};
}

double category_rsr(const FeatureBenchmarkRow& r) {
  const bool addon = r.category == FeatureCategory::major_addon || r.category == FeatureCategory::addon;
  return addon ? r.addon.normalized : r.single.normalized;
}

std::vector<std::string> feature_csv_fields(const FeatureBenchmarkRow& r) {
  const auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); };
  return {r.feature,
          r.labels.script_free ? "1" : "0",
          format_double(category_rsr(r)),
          format_double(r.entropy.global),
          format_double(r.entropy.user_mean),
          std::to_string(r.unique.global),
          std::to_string(dot_scale(r.unique.global)),
          r.logins_until_reauth ? format_double(*r.logins_until_reauth) : "",
          std::string(to_string(r.category)),
          r.labels.server_side ? "1" : "0",
          opt(r.unique.desktop),
          opt(r.unique.mobile),
          format_double(r.single.normalized),
          format_double(r.single.baseline),
          format_double(r.addon.normalized),
          format_double(r.addon.baseline),
          r.pass_a ? "1" : "0",
          r.pass_b ? "1" : "0",
          r.pass_c ? "1" : "0"};
}

std::string render_feature_table(const std::vector<FeatureBenchmarkRow>& rows) {
  const auto section = [&](const std::string& title, auto pick) {
    std::string out = title + "\n";
    out += fmt::format("{:<18} {:>9} {:>8} {:>9} {:>8} {:<7} {:>14}  {}\n", "Feature", "No script", "RSR",
                       "H_global", "H_user", "Unique", "Logins/reauth", "Tests");
    bool any = false;
    for (const auto& r : rows) {
      if (!pick(r)) continue;
      any = true;
      const std::string tests = fmt::format("{}{}{}", r.pass_a ? 'A' : '-', r.pass_b ? 'B' : '-', r.pass_c ? 'C' : '-');
      out += fmt::format("{:<18} {:>9} {:>8} {:>9} {:>8} {} {:>14}  {}\n", r.feature,
                         r.labels.script_free ? "yes" : "no", fixed(category_rsr(r), 2), fixed(r.entropy.global, 2),
                         fixed(r.entropy.user_mean, 2), pad(render_dots(r.unique.global), 7),
                         reauth_text(r.logins_until_reauth), tests);
    }
    if (!any) out += "(none)\n";
    return out + "\n";
  };
  std::string out;
  out += section("Single and major add-on features", [](const FeatureBenchmarkRow& r) {
    return r.category == FeatureCategory::single || r.category == FeatureCategory::major_addon;
  });
  out += section("Add-on features", [](const FeatureBenchmarkRow& r) { return r.category == FeatureCategory::addon; });
  out += section("Rejected features",
                 [](const FeatureBenchmarkRow& r) { return r.category == FeatureCategory::rejected; });
  out += "Unique values: five-dot scale for 10-24, 25-74, 75-149, 150-300, >300.\n";
  return out;
}

}  // namespace riskgate::cli
