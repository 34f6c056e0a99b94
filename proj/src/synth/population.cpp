#include "riskgate/synth/population.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "riskgate/core/errors.hpp"
#include "riskgate/featurekit/derive.hpp"
#include "riskgate/synth/world.hpp"

namespace riskgate::synth {

namespace {

using Rng = std::mt19937_64;

constexpr Timestamp kDay = 86400;
constexpr Timestamp kEpochStart = 1533081600;  // 2018-08-01, versions are relative to it

enum class OsFamily { windows, macos, linux_desktop, ios, android };
enum class Browser { chrome, firefox, safari, edge };

struct Model {
  const char* name;
  const char* screen;
  const char* android_code = "";
};

constexpr std::array<Model, 6> kWindowsModels{{{"Intel HD 520", "1920x1080x24"},
                                               {"Intel UHD 620", "1920x1080x24"},
                                               {"NVIDIA GTX 1050", "1920x1080x24"},
                                               {"NVIDIA GTX 1060", "2560x1440x24"},
                                               {"AMD RX 580", "1920x1200x24"},
                                               {"Intel HD 4000", "1366x768x24"}}};
constexpr std::array<Model, 4> kMacModels{{{"MacBookPro14,1", "1440x900x30"},
                                           {"MacBookAir8,1", "1440x900x30"},
                                           {"MacBookPro15,1", "1680x1050x30"},
                                           {"iMac18,3", "2560x1440x30"}}};
constexpr std::array<Model, 2> kLinuxModels{{{"Mesa Intel", "1920x1080x24"}, {"NVIDIA GTX 960", "1920x1080x24"}}};
constexpr std::array<Model, 6> kIphoneModels{{{"iPhone 6s", "375x667x32"},
                                              {"iPhone 7", "375x667x32"},
                                              {"iPhone 8 Plus", "414x736x32"},
                                              {"iPhone X", "375x812x32"},
                                              {"iPhone XR", "414x896x32"},
                                              {"iPhone 11", "414x896x32"}}};
constexpr std::array<Model, 5> kAndroidModels{{{"Galaxy S9", "360x740x24", "SM-G960F"},
                                               {"Galaxy A50", "412x892x24", "SM-A505FN"},
                                               {"Pixel 3", "393x786x24", "Pixel 3"},
                                               {"P30 lite", "360x780x24", "MAR-LX1A"},
                                               {"Redmi Note 7", "393x851x24", "Redmi Note 7"}}};

struct Language {
  const char* chrome;
  const char* firefox;
  const char* safari;
  const char* edge;
};
// The first entry is the local language.
constexpr std::array<Language, 6> kLanguages{{
    {"de-DE,de;q=0.9,en-US;q=0.8,en;q=0.7", "de,en-US;q=0.7,en;q=0.3", "de-de", "de-DE"},
    {"en-US,en;q=0.9", "en-US,en;q=0.5", "en-us", "en-US"},
    {"tr-TR,tr;q=0.9,de;q=0.8,en-US;q=0.7,en;q=0.6", "tr-TR,tr;q=0.8,de;q=0.5,en;q=0.3", "tr-tr", "tr-TR"},
    {"ru-RU,ru;q=0.9,en-US;q=0.8,en;q=0.7", "ru-RU,ru;q=0.8,en-US;q=0.5,en;q=0.3", "ru-ru", "ru-RU"},
    {"zh-CN,zh;q=0.9,en;q=0.8", "zh-CN,zh;q=0.8,en-US;q=0.5,en;q=0.3", "zh-cn", "zh-CN"},
    {"de-DE,de;q=0.9,en;q=0.8", "de-DE,de;q=0.8,en-US;q=0.5,en;q=0.3", "de-DE", "de-DE"},
}};

struct Device {
  bool mobile = false;
  OsFamily os = OsFamily::windows;
  Browser browser = Browser::chrome;
  std::size_t model = 0;
  bool windows7 = false;
  int mac_minor = 14;      // macOS 10.x at the start
  int android_major = 9;
  int update_lag_days = 0;  // delay before new browser versions arrive
  bool upgrades_os = true;
  std::string cookie;
  double cookie_reset = 0.1;
};

struct User {
  std::size_t region = 0;
  std::size_t broadband = 0;
  std::optional<std::size_t> campus;
  std::size_t mobile_carrier = 0;
  std::size_t language = 0;
  double new_address = 0.3;  // chance a home login gets a fresh address
  double travel = 0.03;
  double mobile_share = 0.0;  // among logins, when the user has both kinds
  double access_offset_ms = 6.0;
  double peak_hour = 15.0;
  bool blocks_scripts = false;
  bool blocks_cookies = false;
  std::vector<Device> devices;  // desktop first when present
  std::map<std::size_t, std::string> last_address;
};

template <std::size_t N>
std::size_t weighted(const std::array<double, N>& weights, Rng& rng) {
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  return pick(rng);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
bool chance(Rng& rng, double p) { return std::bernoulli_distribution(std::clamp(p, 0.0, 1.0))(rng); }

std::string hex_token(Rng& rng, int digits) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (int i = 0; i < digits; ++i) out.push_back(kHex[rng() & 0xf]);
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const Model& model_of(const Device& d) {
  switch (d.os) {
    case OsFamily::windows: return kWindowsModels[d.model % kWindowsModels.size()];
    case OsFamily::macos: return kMacModels[d.model % kMacModels.size()];
    case OsFamily::linux_desktop: return kLinuxModels[d.model % kLinuxModels.size()];
    case OsFamily::ios: return kIphoneModels[d.model % kIphoneModels.size()];
    case OsFamily::android: return kAndroidModels[d.model % kAndroidModels.size()];
  }
  return kWindowsModels[0];
}

std::size_t model_count(OsFamily os) {
  switch (os) {
    case OsFamily::windows: return kWindowsModels.size();
    case OsFamily::macos: return kMacModels.size();
    case OsFamily::linux_desktop: return kLinuxModels.size();
    case OsFamily::ios: return kIphoneModels.size();
    case OsFamily::android: return kAndroidModels.size();
  }
  return 1;
}

// Browser family prior restricted to the families available on an OS.
Browser pick_browser(OsFamily os, Rng& rng) {
  // Safari, Chrome, Firefox, Edge
  std::array<double, 4> w{0.404, 0.290, 0.261, 0.033};
  switch (os) {
    case OsFamily::windows: w[0] = 0; break;
    case OsFamily::macos: w[3] = 0; break;
    case OsFamily::linux_desktop: w[0] = w[3] = 0; break;
    case OsFamily::ios: w[2] *= 0.1; w[3] = 0; break;
    case OsFamily::android: w[0] = w[3] = 0; break;
  }
  switch (weighted(w, rng)) {
    case 0: return Browser::safari;
    case 1: return Browser::chrome;
    case 2: return Browser::firefox;
    default: return Browser::edge;
  }
}

Device make_device(bool mobile, Rng& rng) {
  Device d;
  d.mobile = mobile;
  if (mobile) {
    d.os = weighted(std::array<double, 2>{0.752, 0.248}, rng) == 0 ? OsFamily::ios : OsFamily::android;
  } else {
    switch (weighted(std::array<double, 3>{0.625, 0.372, 0.003}, rng)) {
      case 0: d.os = OsFamily::windows; break;
      case 1: d.os = OsFamily::macos; break;
      default: d.os = OsFamily::linux_desktop; break;
    }
  }
  d.browser = pick_browser(d.os, rng);
  d.model = std::uniform_int_distribution<std::size_t>(0, model_count(d.os) - 1)(rng);
  d.windows7 = d.os == OsFamily::windows && chance(rng, 0.15);
  d.mac_minor = 12 + static_cast<int>(weighted(std::array<double, 3>{0.2, 0.45, 0.35}, rng));
  d.android_major = 8 + static_cast<int>(weighted(std::array<double, 2>{0.45, 0.55}, rng));
  d.update_lag_days = std::uniform_int_distribution<int>(0, 45)(rng);
  d.upgrades_os = chance(rng, 0.6);
  d.cookie_reset = uniform(rng, 0.02, 0.25);
  return d;
}

// ---- versions over time -------------------------------------------------

struct BrowserVersion {
  int major = 0;
  std::string full;
};

int days_since_start(Timestamp ts) { return static_cast<int>((ts - kEpochStart) / kDay); }

BrowserVersion chrome_version(int days) {
  const int major = 68 + std::max(0, days) / 45;
  const int build = 3440 + (major - 68) * 97;
  const int patch = 80 + (std::max(0, days) % 45) * 2;
  return {major, std::to_string(major) + ".0." + std::to_string(build) + "." + std::to_string(patch)};
}

BrowserVersion firefox_version(int days) {
  const int major = 61 + std::max(0, days) / 44;
  return {major, std::to_string(major) + ".0"};
}

// Safari and iOS majors follow the yearly September releases.
int apple_major(int days) {
  if (days < 47) return 11;   // before 2018-09-17
  if (days < 414) return 12;  // before 2019-09-19
  return 13;
}

int apple_minor(int days) {
  const int since = days < 47 ? days + 320 : (days < 414 ? days - 47 : days - 414);
  return std::min(4, std::max(0, since) / 75);
}

std::string ua_string(const Device& d, Timestamp ts) {
  const int days = days_since_start(ts) - d.update_lag_days;
  const BrowserVersion chrome = chrome_version(days);
  const BrowserVersion firefox = firefox_version(days);
  const int year = std::max(0, days + 60) / 365;  // OS upgrades each autumn
  std::ostringstream os;
  switch (d.os) {
    case OsFamily::windows: {
      const std::string nt = d.windows7 ? "Windows NT 6.1; Win64; x64" : "Windows NT 10.0; Win64; x64";
      if (d.browser == Browser::firefox) {
        os << "Mozilla/5.0 (" << nt << "; rv:" << firefox.major << ".0) Gecko/20100101 Firefox/" << firefox.full;
      } else if (d.browser == Browser::edge && !d.windows7) {
        if (days >= 532) {  // Chromium-based Edge from 2020-01-15
          const BrowserVersion c = chrome_version(days);
          os << "Mozilla/5.0 (" << nt << ") AppleWebKit/537.36 (KHTML, like Gecko) Chrome/" << c.full
             << " Safari/537.36 Edg/" << c.major << ".0." << (c.major * 4 + 45) << ".0";
        } else {
          const std::string edge = days < 104 ? "17.17134" : "18.17763";
          os << "Mozilla/5.0 (" << nt << ") AppleWebKit/537.36 (KHTML, like Gecko) Chrome/70.0.3538.102"
             << " Safari/537.36 Edge/" << edge;
        }
      } else {
        os << "Mozilla/5.0 (" << nt << ") AppleWebKit/537.36 (KHTML, like Gecko) Chrome/" << chrome.full
           << " Safari/537.36";
      }
      break;
    }
    case OsFamily::macos: {
      const int minor = std::min(15, d.mac_minor + (d.upgrades_os ? year : 0));
      const int patch = std::min(6, std::max(0, days % 365) / 60);
      if (d.browser == Browser::firefox) {
        os << "Mozilla/5.0 (Macintosh; Intel Mac OS X 10." << minor << "; rv:" << firefox.major
           << ".0) Gecko/20100101 Firefox/" << firefox.full;
      } else if (d.browser == Browser::safari) {
        // Safari version follows the OS a machine can run.
        const int safari = std::min(apple_major(days), minor - 1);
        os << "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_" << minor << '_' << patch
           << ") AppleWebKit/605.1.15 (KHTML, like Gecko) Version/" << safari << '.' << apple_minor(days)
           << " Safari/605.1.15";
      } else {
        os << "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_" << minor << '_' << patch
           << ") AppleWebKit/537.36 (KHTML, like Gecko) Chrome/" << chrome.full << " Safari/537.36";
      }
      break;
    }
    case OsFamily::linux_desktop:
      if (d.browser == Browser::chrome) {
        os << "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/" << chrome.full
           << " Safari/537.36";
      } else {
        os << "Mozilla/5.0 (X11; Ubuntu; Linux x86_64; rv:" << firefox.major << ".0) Gecko/20100101 Firefox/"
           << firefox.full;
      }
      break;
    case OsFamily::ios: {
      const int major = d.upgrades_os ? apple_major(days) : std::min(apple_major(days), 12);
      const int minor = apple_minor(days);
      const std::string version = std::to_string(major) + "_" + std::to_string(minor);
      if (d.browser == Browser::chrome) {
        os << "Mozilla/5.0 (iPhone; CPU iPhone OS " << version
           << " like Mac OS X) AppleWebKit/605.1.15 (KHTML, like Gecko) CriOS/" << chrome.full
           << " Mobile/15E148 Safari/604.1";
      } else if (d.browser == Browser::firefox) {
        os << "Mozilla/5.0 (iPhone; CPU iPhone OS " << version
           << " like Mac OS X) AppleWebKit/605.1.15 (KHTML, like Gecko) FxiOS/" << (firefox.major - 48)
           << ".0 Mobile/15E148 Safari/605.1.15";
      } else {
        os << "Mozilla/5.0 (iPhone; CPU iPhone OS " << version
           << " like Mac OS X) AppleWebKit/605.1.15 (KHTML, like Gecko) Version/" << major << '.' << minor
           << " Mobile/15E148 Safari/604.1";
      }
      break;
    }
    case OsFamily::android: {
      const int major = std::min(10, d.android_major + (d.upgrades_os ? year : 0));
      const char* code = model_of(d).android_code;
      if (d.browser == Browser::firefox) {
        os << "Mozilla/5.0 (Android " << major << "; Mobile; rv:" << firefox.major << ".0) Gecko/"
           << firefox.major << ".0 Firefox/" << firefox.full;
      } else {
        os << "Mozilla/5.0 (Linux; Android " << major << "; " << code
           << ") AppleWebKit/537.36 (KHTML, like Gecko) Chrome/" << chrome.full << " Mobile Safari/537.36";
      }
      break;
    }
  }
  return os.str();
}

std::string fingerprint(const Device& d) {
  // Canvas/WebGL output depends on hardware and rendering engine, not on
  // browser version, so identical setups collide.
  std::ostringstream key;
  key << model_of(d).name << '|' << static_cast<int>(d.os) << '|' << static_cast<int>(d.browser) << '|'
      << d.windows7;
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(fnv1a(key.str())));
  return buffer;
}

std::string language(const User& u, const Device& d) {
  const Language& l = kLanguages[u.language];
  switch (d.browser) {
    case Browser::chrome: return l.chrome;
    case Browser::firefox: return l.firefox;
    case Browser::safari: return l.safari;
    case Browser::edge: return l.edge;
  }
  return l.chrome;
}

// ---- users ---------------------------------------------------------------

User make_user(const PopulationConfig& config, const SyntheticWorld& world, Rng& rng) {
  User u;
  const auto home_regions = world.regions_of(world.home_country());
  if (chance(rng, config.home_region_share)) {
    u.region = world.home_region();
  } else if (chance(rng, 0.75)) {
    u.region = home_regions[std::uniform_int_distribution<std::size_t>(1, home_regions.size() - 1)(rng)];
  } else {
    std::vector<std::size_t> foreign;
    for (std::size_t r = 0; r < world.regions().size(); ++r) {
      if (world.regions()[r].country != world.home_country()) foreign.push_back(r);
    }
    u.region = foreign[std::uniform_int_distribution<std::size_t>(0, foreign.size() - 1)(rng)];
  }
  const auto broadband = world.networks_in(u.region, NetworkKind::broadband);
  u.broadband = broadband[std::uniform_int_distribution<std::size_t>(0, broadband.size() - 1)(rng)];
  if (u.region == world.home_region() && chance(rng, 0.35)) {
    u.campus = world.networks_in(world.home_region(), NetworkKind::campus).front();
  }
  const auto carriers = world.networks_of(NetworkKind::mobile);
  u.mobile_carrier = carriers[std::uniform_int_distribution<std::size_t>(0, carriers.size() - 1)(rng)];
  u.language = weighted(std::array<double, 6>{0.78, 0.06, 0.04, 0.03, 0.03, 0.06}, rng);
  if (world.regions()[u.region].country != world.home_country() && chance(rng, 0.6)) u.language = 1;
  u.new_address = uniform(rng, 0.05, 0.6);
  u.travel = uniform(rng, 0.0, 0.08);
  const auto kind = world.networks()[u.broadband].asn == "AS31334" ? 4.0 : 8.0;  // cable vs DSL
  u.access_offset_ms = kind + uniform(rng, -2.0, 4.0);
  u.peak_hour = std::clamp(std::normal_distribution<double>(15.0, 3.5)(rng), 7.0, 23.0);
  u.blocks_scripts = chance(rng, 0.03);
  u.blocks_cookies = chance(rng, 0.04);

  // Device mix: desktop only, mobile only, or both with a per-user share.
  const double mobile_logins = 1.0 - config.desktop_fraction;
  const double both = std::min(0.4, 1.0 - mobile_logins);
  const double share = both > 0 ? std::min(0.25, mobile_logins / both) : 0.0;
  const double mobile_only = std::clamp(mobile_logins - both * share, 0.0, 1.0 - both);
  const double roll = uniform(rng, 0.0, 1.0);
  if (roll < mobile_only) {
    u.devices.push_back(make_device(true, rng));
  } else if (roll < mobile_only + both) {
    u.devices.push_back(make_device(false, rng));
    u.devices.push_back(make_device(true, rng));
    u.mobile_share = share;
  } else {
    u.devices.push_back(make_device(false, rng));
  }
  if (!u.devices.front().mobile && chance(rng, 0.12)) u.devices.insert(u.devices.begin() + 1, make_device(false, rng));
  return u;
}

std::size_t login_count(const PopulationConfig& config, Rng& rng) {
  // 1 + negative binomial (Poisson with gamma-distributed rate).
  const double mean = std::max(0.0, config.mean_logins - 1.0);
  const double var = config.sd_logins * config.sd_logins;
  double rate = mean;
  if (var > mean && mean > 0) {
    const double shape = mean * mean / (var - mean);
    rate = std::gamma_distribution<double>(shape, mean / shape)(rng);
  }
  const std::size_t extra = rate > 0 ? std::poisson_distribution<std::size_t>(rate)(rng) : 0;
  return std::min(config.max_logins, 1 + extra);
}

std::vector<Timestamp> login_times(const PopulationConfig& config, const User& u, std::size_t count, Rng& rng) {
  const double span = static_cast<double>(config.end - config.start);
  const double mean_gap = std::exp(uniform(rng, std::log(0.5), std::log(25.0))) * kDay;
  std::vector<double> offsets;
  double t = 0;
  for (std::size_t i = 0; i < count; ++i) {
    offsets.push_back(t);
    t += std::exponential_distribution<double>(1.0 / mean_gap)(rng);
  }
  const double active = std::min(offsets.back(), span * 0.98);
  const double scale = offsets.back() > 0 ? active / offsets.back() : 0.0;
  const double begin = uniform(rng, 0.0, span - active);
  std::vector<Timestamp> out;
  for (double o : offsets) {
    const auto day = static_cast<Timestamp>((begin + o * scale) / kDay);
    double hour = std::normal_distribution<double>(u.peak_hour, 2.5)(rng);
    hour = std::fmod(std::fmod(hour, 24.0) + 24.0, 24.0);
    const auto second = static_cast<Timestamp>(hour * 3600.0);
    out.push_back(std::clamp(config.start + day * kDay + second, config.start, config.end));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string rtt_probe(double base_ms, bool mobile, Rng& rng) {
  const double floor = std::max(1.0, base_ms + std::normal_distribution<double>(0.0, mobile ? 4.0 : 1.2)(rng));
  std::exponential_distribution<double> jitter(1.0 / (mobile ? 12.0 : 4.0));
  std::vector<double> probes;
  for (int i = 0; i < 5; ++i) probes.push_back(floor + jitter(rng));
  return format_rtt_measurements(probes);
}

struct Generated {
  Timestamp ts;
  std::size_t user;
  std::size_t seq;
  FeatureMap features;
};

}  // namespace

void PopulationConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw Error(Errc::invalid_config, "generator." + field + ": " + why);
  };
  if (users == 0) fail("users", "must be positive");
  if (!(mean_logins >= 1.0)) fail("meanLogins", "must be at least 1");
  if (!(sd_logins >= 0.0)) fail("sdLogins", "must be non-negative");
  if (max_logins == 0) fail("maxLogins", "must be positive");
  if (!(desktop_fraction >= 0.0 && desktop_fraction <= 1.0)) fail("desktopFraction", "must be in [0, 1]");
  if (!(home_region_share >= 0.0 && home_region_share <= 1.0)) fail("homeRegionShare", "must be in [0, 1]");
  if (end <= start) fail("end", "must be after start");
  if (pool_addresses_per_network == 0) fail("poolAddressesPerNetwork", "must be positive");
  if (features.empty()) fail("features", "must not be empty");
  std::set<std::string> seen;
  for (const auto& f : features) {
    if (std::find(generator_features().begin(), generator_features().end(), f) == generator_features().end()) {
      fail("features", "unknown feature '" + f + "'");
    }
    if (!seen.insert(f).second) fail("features", "duplicate feature '" + f + "'");
  }
}

Population generate_population(const PopulationConfig& config) {
  config.validate();
  const SyntheticWorld& world = SyntheticWorld::standard();
  Rng rng(config.seed);

  std::vector<Generated> rows;
  for (std::size_t index = 0; index < config.users; ++index) {
    Rng user_rng(config.seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    User u = make_user(config, world, user_rng);
    const std::size_t count = login_count(config, user_rng);
    const auto times = login_times(config, u, count, user_rng);

    for (std::size_t seq = 0; seq < times.size(); ++seq) {
      std::size_t device = 0;
      if (u.devices.size() > 1) {
        const bool has_mobile = u.devices.back().mobile;
        if (has_mobile && chance(user_rng, u.mobile_share)) {
          device = u.devices.size() - 1;
        } else if (u.devices.size() > 2 || !has_mobile) {
          device = chance(user_rng, 0.3) ? 1 : 0;
        }
      }
      Device& d = u.devices[device];

      // Network attachment for this login.
      std::size_t network = u.broadband;
      double access = u.access_offset_ms;
      if (d.mobile && chance(user_rng, 0.6)) {
        network = u.mobile_carrier;
        access = 30.0;
      } else if (u.campus && !d.mobile && chance(user_rng, 0.4)) {
        network = *u.campus;
        access = 1.0;
      } else if (chance(user_rng, u.travel)) {
        const auto regions = world.regions_of(world.home_country());
        const std::size_t r = regions[std::uniform_int_distribution<std::size_t>(0, regions.size() - 1)(user_rng)];
        const auto nets = world.networks_in(r, NetworkKind::broadband);
        network = nets[std::uniform_int_distribution<std::size_t>(0, nets.size() - 1)(user_rng)];
      }
      const Network& net = world.networks()[network];

      std::string address;
      if (net.kind == NetworkKind::broadband) {
        auto it = u.last_address.find(network);
        if (it == u.last_address.end() || chance(user_rng, u.new_address)) {
          address = world.random_address(network, user_rng);
          u.last_address[network] = address;
        } else {
          address = it->second;
        }
      } else {
        address = world.random_address(network, user_rng);
      }

      if (d.cookie.empty() || chance(user_rng, d.cookie_reset)) d.cookie = hex_token(user_rng, 24);

      FeatureMap features;
      const double base = world.regions()[net.region].rtt_base_ms + access;
      const std::string rtt = rtt_probe(base, net.kind == NetworkKind::mobile, user_rng);
      for (const auto& column : config.features) {
        FeatureValue value;
        if (column == "ip") value = FeatureValue(address);
        else if (column == "ua") value = FeatureValue(ua_string(d, times[seq]));
        else if (column == "rtt") value = u.blocks_scripts ? FeatureValue() : FeatureValue(rtt);
        else if (column == "cookie") value = u.blocks_cookies ? FeatureValue() : FeatureValue(d.cookie);
        else if (column == "fp") value = u.blocks_scripts ? FeatureValue() : FeatureValue(fingerprint(d));
        else if (column == "screen") value = u.blocks_scripts ? FeatureValue() : FeatureValue(model_of(d).screen);
        else if (column == "lang") value = FeatureValue(language(u, d));
        features.emplace(column, std::move(value));
      }
      rows.push_back(Generated{times[seq], index, seq, std::move(features)});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Generated& a, const Generated& b) {
    return std::tie(a.ts, a.user, a.seq) < std::tie(b.ts, b.user, b.seq);
  });

  Population out;
  out.dataset.meta.feature_names = config.features;
  out.dataset.meta.user_count = 0;
  std::set<std::size_t> users;
  out.dataset.events.reserve(rows.size());
  for (auto& row : rows) {
    users.insert(row.user);
    char id[32];
    std::snprintf(id, sizeof(id), "u%04zu", row.user + 1);
    out.dataset.events.push_back(LoginEvent{std::nullopt, UserId(id), row.ts, std::move(row.features), Label::legit()});
  }
  out.dataset.meta.user_count = users.size();

  out.lookup = world.lookup_table();
  std::ostringstream table;
  world.write_lookup_table(table);
  out.lookup_text = table.str();

  // Exit addresses: VPN and hosting networks, plus residential proxies on
  // consumer broadband that no user of the population ever logged in from.
  std::set<std::string> used;
  for (const auto& e : out.dataset.events) {
    if (const auto& ip = e.value(columns::ip); !ip.is_missing()) used.insert(ip.token());
  }
  for (std::size_t n : world.networks_of(NetworkKind::hosting)) {
    const Network& net = world.networks()[n];
    for (std::size_t i = 0; i < config.pool_addresses_per_network; ++i) {
      const auto address = world.random_address(n, rng);
      out.pool.add(PoolEntry{*IpPrefix::parse(address), world.regions()[net.region].country});
    }
  }
  const std::size_t residential = std::max<std::size_t>(1, config.pool_addresses_per_network / 4);
  for (std::size_t n : world.networks_of(NetworkKind::broadband)) {
    const Network& net = world.networks()[n];
    for (std::size_t i = 0; i < residential; ++i) {
      auto address = world.random_address(n, rng);
      while (used.count(address)) address = world.random_address(n, rng);
      out.pool.add(PoolEntry{*IpPrefix::parse(address), world.regions()[net.region].country});
    }
  }
  return out;
}

}  // namespace riskgate::synth
