#include "riskgate/perfbench/timing.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>

#include "riskgate/core/errors.hpp"
#include "riskgate/engines/simple.hpp"
#include "riskgate/evalsuite/metrics.hpp"

namespace riskgate {

namespace {

void check_increasing(const std::vector<std::size_t>& xs, const char* what) {
  if (xs.empty()) throw Error(Errc::invalid_argument, std::string(what) + " must not be empty");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0) throw Error(Errc::invalid_argument, std::string(what) + " must be positive");
    if (i > 0 && xs[i] <= xs[i - 1])
      throw Error(Errc::invalid_argument, std::string(what) + " must be strictly increasing");
  }
}

// Keeps the optimizer from discarding a score.
volatile double g_sink = 0.0;

double time_once(const RiskEngine& engine, const HistoryView& view, const LoginEvent& probe) {
  const auto t0 = std::chrono::steady_clock::now();
  const double s = engine.risk(view, probe);
  const auto t1 = std::chrono::steady_clock::now();
  g_sink = s;
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

// Warm-up then timed runs; probe i is probes[i % probes.size()].
std::vector<double> time_config(const RiskEngine& engine, const HistoryView& view,
                                const std::vector<const LoginEvent*>& probes, const TimingOptions& opt) {
  for (std::size_t i = 0; i < opt.warmup; ++i) g_sink = engine.risk(view, *probes[i % probes.size()]);
  std::vector<double> out;
  out.reserve(opt.runs);
  for (std::size_t i = 0; i < opt.runs; ++i) out.push_back(time_once(engine, view, *probes[i % probes.size()]));
  return out;
}

// `count` probes spread evenly over the legitimate logins.
std::vector<const LoginEvent*> pick_probes(const std::vector<const LoginEvent*>& legit, std::size_t count) {
  std::vector<const LoginEvent*> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(legit[(i * legit.size()) / count]);
  return out;
}

void append_config(BenchSeries& series, const std::string& tag, std::size_t features, std::size_t history,
                   const std::vector<double>& times) {
  for (double t : times) series.runs.push_back({tag, features, history, t});
  series.medians.push_back({tag, features, history, median(times)});
}

RegressionFit fit_on(const BenchSeries& series, bool by_history) {
  std::vector<double> xs, ys;
  for (const auto& s : series.runs) {
    xs.push_back(static_cast<double>(by_history ? s.history_size : s.feature_count));
    ys.push_back(s.elapsed_ms);
  }
  return linfit(xs, ys);
}

}  // namespace

void TimingOptions::validate() const {
  if (runs == 0) throw Error(Errc::invalid_argument, "timed runs must be positive");
}

std::size_t engine_feature_count(const RiskEngine& engine) {
  if (const auto* e = dynamic_cast<const ExtendEngine*>(&engine)) return e->config().features.size();
  if (const auto* s = dynamic_cast<const SimpleEngine*>(&engine)) {
    const auto& cfg = s->config();
    if (cfg.variant == SimpleVariant::custom) return cfg.features.size();
    return cfg.variant == SimpleVariant::ipua ? SimpleConfig::ipua().features.size()
                                              : SimpleConfig::all().features.size();
  }
  return 0;
}

BenchSeries bench_history_scaling(const RiskEngine& engine, const std::vector<LoginEvent>& events,
                                  const std::vector<std::size_t>& sizes, const TimingOptions& options) {
  options.validate();
  check_increasing(sizes, "history sizes");
  std::vector<const LoginEvent*> legit;
  for (const auto& e : events)
    if (e.label.legitimate()) legit.push_back(&e);
  if (legit.size() < sizes.back())
    throw Error(Errc::insufficient_data, "dataset has " + std::to_string(legit.size()) +
                                             " legitimate logins, the largest history size needs " +
                                             std::to_string(sizes.back()));

  const std::size_t features = engine_feature_count(engine);
  BenchSeries series;
  for (std::size_t size : sizes) {
    HistoryStore store;
    for (std::size_t i = 0; i < size; ++i) store.append(*legit[i]);
    std::vector<const LoginEvent*> prefix(legit.begin(), legit.begin() + static_cast<std::ptrdiff_t>(size));
    const auto probes = pick_probes(prefix, options.warmup + options.runs);
    std::vector<const LoginEvent*> timed(probes.begin() + static_cast<std::ptrdiff_t>(options.warmup), probes.end());
    std::vector<const LoginEvent*> warm(probes.begin(), probes.begin() + static_cast<std::ptrdiff_t>(options.warmup));
    const HistoryView view = store.view();
    for (const auto* p : warm) g_sink = engine.risk(view, *p);
    std::vector<double> times;
    times.reserve(options.runs);
    for (const auto* p : timed) times.push_back(time_once(engine, view, *p));
    append_config(series, engine.tag(), features, size, times);
  }
  return series;
}

FeatureScaling bench_feature_scaling(const FeatureCatalog& catalog, const SmoothingConfig& smoothing,
                                     const HistoryStore& store, const std::vector<std::string>& candidates,
                                     const std::vector<std::size_t>& counts, const TimingOptions& options) {
  options.validate();
  if (candidates.empty()) throw Error(Errc::invalid_argument, "no candidate features");
  check_increasing(counts, "feature counts");
  std::vector<const LoginEvent*> legit;
  for (const auto& e : store.events())
    if (e.label.legitimate()) legit.push_back(&e);
  if (legit.empty()) throw Error(Errc::insufficient_data, "store has no legitimate logins");

  const HistoryView view = store.view();
  const auto probes = pick_probes(legit, std::max<std::size_t>(options.runs, 1));

  FeatureScaling out;
  for (const auto& name : candidates) {
    ExtendEngine engine(catalog, ExtendConfig{{name}, smoothing});
    out.feature_runs.push_back(time_config(engine, view, probes, options));
    out.feature_medians.emplace_back(name, median(out.feature_runs.back()));
  }
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.feature_medians[a].second < out.feature_medians[b].second;
  });
  out.representative = candidates[order[(order.size() - 1) / 2]];

  for (std::size_t count : counts) {
    ExtendEngine engine(catalog, ExtendConfig{std::vector<std::string>(count, out.representative), smoothing});
    append_config(out.series, engine.tag(), count, view.total_logins(), time_config(engine, view, probes, options));
  }
  return out;
}

RegressionFit fit_history(const BenchSeries& series) { return fit_on(series, true); }
RegressionFit fit_features(const BenchSeries& series) { return fit_on(series, false); }

BenchLock::BenchLock(const std::filesystem::path& path) {
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error(Errc::io_error, "cannot open lock file " + path.string() + ": " + std::strerror(errno));
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    const int err = errno;
    ::close(fd_);
    fd_ = -1;
    if (err == EWOULDBLOCK) throw Error(Errc::io_error, "another benchmark holds " + path.string());
    throw Error(Errc::io_error, "cannot lock " + path.string() + ": " + std::strerror(err));
  }
}

BenchLock::~BenchLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

std::filesystem::path default_lock_path() {
  return std::filesystem::temp_directory_path() / "riskgate-perfbench.lock";
}

}  // namespace riskgate
