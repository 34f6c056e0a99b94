#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "riskgate/core/history.hpp"
#include "riskgate/engines/extend.hpp"
#include "riskgate/engines/verdict.hpp"
#include "riskgate/perfbench/regression.hpp"

namespace riskgate {

struct TimingSample {
  std::string engine;
  std::size_t feature_count = 0;
  std::size_t history_size = 0;
  double elapsed_ms = 0.0;
  friend bool operator==(const TimingSample&, const TimingSample&) = default;
};

struct TimingOptions {
  std::size_t warmup = 5;
  std::size_t runs = 30;
  // Throws InvalidArgument when runs is 0.
  void validate() const;
};

struct BenchSeries {
  std::vector<TimingSample> runs;     // every timed scoring
  std::vector<TimingSample> medians;  // one per configuration
};

// Number of scored features of an engine: EXTEND descriptor occurrences, or
// SIMPLE feature slots.
std::size_t engine_feature_count(const RiskEngine& engine);

// Scores every size with its own store holding the first `size` legitimate
// events of `events` (time-ordered, already enriched). Run i of a size scores
// a different login of that prefix, as its user, against the full prefix.
//
// Throws InvalidArgument unless sizes are positive and strictly increasing,
// InsufficientData when `events` has fewer legitimate logins than the
// largest size.
BenchSeries bench_history_scaling(const RiskEngine& engine, const std::vector<LoginEvent>& events,
                                  const std::vector<std::size_t>& sizes, const TimingOptions& options = {});

struct FeatureScaling {
  std::string representative;  // feature with the median per-feature time
  std::vector<std::pair<std::string, double>> feature_medians;  // ms, candidate order
  std::vector<std::vector<double>> feature_runs;                 // ms, candidate order
  BenchSeries series;          // one configuration per count
};

// Times EXTEND with each candidate as its only feature, picks the candidate
// whose median time is the (lower) median of those medians, then times
// that feature added `count` times for every count. Probes cycle over the
// store's legitimate logins.
//
// Throws InvalidArgument for empty candidates or counts that are not
// positive and strictly increasing, InsufficientData for a store without
// legitimate logins.
FeatureScaling bench_feature_scaling(const FeatureCatalog& catalog, const SmoothingConfig& smoothing,
                                     const HistoryStore& store, const std::vector<std::string>& candidates,
                                     const std::vector<std::size_t>& counts, const TimingOptions& options = {});

// Fit of elapsed time on history size (or feature count) over raw runs.
RegressionFit fit_history(const BenchSeries& series);
RegressionFit fit_features(const BenchSeries& series);

// An exclusive advisory lock on a file, held for the object's lifetime.
// Throws Error(io_error) when another process holds it.
class BenchLock {
 public:
  explicit BenchLock(const std::filesystem::path& path);
  ~BenchLock();
  BenchLock(const BenchLock&) = delete;
  BenchLock& operator=(const BenchLock&) = delete;

 private:
  int fd_ = -1;
};

std::filesystem::path default_lock_path();

}  // namespace riskgate
