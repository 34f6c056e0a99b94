#include <doctest.h>

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <filesystem>
#include <random>

#include "helpers.hpp"
#include "riskgate/core/errors.hpp"
#include "riskgate/engines/extend.hpp"
#include "riskgate/engines/simple.hpp"
#include "riskgate/featurekit/catalog.hpp"
#include "riskgate/perfbench/regression.hpp"
#include "riskgate/perfbench/timing.hpp"

using namespace riskgate;
using testing::login;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::invalid_argument;
}

// Slope test through the t statistic, a second route to the F-test p-value.
double slope_t_p(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
  const double b = sxy / sxx, a = my - b * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sse += std::pow(y[i] - a - b * x[i], 2);
  const double se = std::sqrt(sse / (n - 2) / sxx);
  const boost::math::students_t t(n - 2);
  return 2 * boost::math::cdf(boost::math::complement(t, std::abs(b / se)));
}

std::vector<LoginEvent> corpus(std::size_t n) {
  std::vector<LoginEvent> out;
  std::mt19937_64 rng(3);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string user = "u" + std::to_string(rng() % 20);
    const std::string ip = "10.0.0." + std::to_string(rng() % 50);
    const std::string ua = "UA" + std::to_string(rng() % 7);
    out.push_back(login(user, static_cast<Timestamp>(i), {{"ip", ip.c_str()}, {"ip_country", "DE"}, {"ua", ua.c_str()}}));
  }
  return out;
}

}  // namespace

TEST_CASE("effect size") {
  CHECK(cohen_f(0.42) == doctest::Approx(0.85).epsilon(0.01));
  CHECK(cohen_f(0.42) == doctest::Approx(std::sqrt(0.42 / 0.58)));
  CHECK(cohen_f(0.12) == doctest::Approx(0.37).epsilon(0.01));
  CHECK(cohen_f(0.0) == 0.0);
  CHECK(std::isinf(cohen_f(1.0)));
  CHECK_THROWS_AS(cohen_f(-0.1), Error);
  CHECK_THROWS_AS(cohen_f(1.1), Error);
}

TEST_CASE("linfit exact line and degenerate inputs") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(2 + 3 * v);
  const auto fit = linfit(x, y);
  CHECK(fit.slope == doctest::Approx(3.0));
  CHECK(fit.intercept == doctest::Approx(2.0));
  CHECK(fit.r_squared == 1.0);
  CHECK(fit.p_value == 0.0);
  CHECK(fit.n == 5);

  const std::vector<double> flat{4, 4, 4, 4, 4};
  const auto f0 = linfit(x, flat);
  CHECK(f0.slope == 0.0);
  CHECK(f0.r_squared == 0.0);
  CHECK(f0.p_value == 1.0);

  CHECK(code_of([&] { linfit(std::vector<double>{1, 2}, std::vector<double>{1, 2}); }) == Errc::insufficient_data);
  CHECK(code_of([&] { linfit(x, std::vector<double>{1, 2, 3}); }) == Errc::insufficient_data);
  CHECK(code_of([&] { linfit(flat, x); }) == Errc::degenerate_x);
}

TEST_CASE("property: linfit agrees with the t-test route") {
  std::mt19937_64 rng(51);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 40;
    const double slope = noise(rng) * 0.5;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(static_cast<double>(rng() % 10));
      y.push_back(1.0 + slope * x.back() + noise(rng));
    }
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) continue;
    const auto fit = linfit(x, y);
    CHECK(fit.p_value == doctest::Approx(slope_t_p(x, y)).epsilon(1e-8));
    CHECK(fit.r_squared >= 0.0);
    CHECK(fit.r_squared <= 1.0);
    CHECK(fit.cohen_f == doctest::Approx(cohen_f(fit.r_squared)));
  }
}

TEST_CASE("history scaling runs one configuration per size") {
  const auto events = corpus(400);
  ExtendConfig cfg;
  cfg.features = {"ip", "ua"};
  const ExtendEngine engine(FeatureCatalog::builtin(), cfg);
  const TimingOptions opts{2, 7};
  const auto series = bench_history_scaling(engine, events, {50, 100, 400}, opts);
  CHECK(series.runs.size() == 21);
  REQUIRE(series.medians.size() == 3);
  CHECK(series.medians[0].history_size == 50);
  CHECK(series.medians[2].history_size == 400);
  for (const auto& r : series.runs) {
    CHECK(r.engine == "extend");
    CHECK(r.feature_count == 2);
    CHECK(r.elapsed_ms >= 0.0);
  }
  CHECK(engine_feature_count(engine) == 2);
  CHECK(engine_feature_count(SimpleEngine(SimpleConfig::all())) == 5);
  const auto fit = fit_history(series);
  CHECK(fit.n == 21);

  CHECK(code_of([&] { bench_history_scaling(engine, events, {100, 50}, opts); }) == Errc::invalid_argument);
  CHECK(code_of([&] { bench_history_scaling(engine, events, {0, 50}, opts); }) == Errc::invalid_argument);
  CHECK(code_of([&] { bench_history_scaling(engine, events, {500}, opts); }) == Errc::insufficient_data);
  CHECK_THROWS_AS((TimingOptions{1, 0}.validate()), Error);
}

TEST_CASE("feature scaling picks the median feature") {
  const auto store = testing::store_of(corpus(300));
  const std::vector<std::string> candidates{"ip", "ua", "ip_country"};
  const auto fs = bench_feature_scaling(FeatureCatalog::builtin(), {}, store, candidates, {1, 2, 4}, {1, 5});
  REQUIRE(fs.feature_medians.size() == 3);
  REQUIRE(fs.feature_runs.size() == 3);
  for (const auto& r : fs.feature_runs) CHECK(r.size() == 5);
  std::vector<double> medians;
  for (const auto& [_, m] : fs.feature_medians) medians.push_back(m);
  std::sort(medians.begin(), medians.end());
  const auto rep = std::find_if(fs.feature_medians.begin(), fs.feature_medians.end(),
                                [&](const auto& p) { return p.first == fs.representative; });
  REQUIRE(rep != fs.feature_medians.end());
  CHECK(rep->second == medians[1]);
  CHECK(fs.series.runs.size() == 15);
  REQUIRE(fs.series.medians.size() == 3);
  CHECK(fs.series.medians[2].feature_count == 4);
  CHECK(fit_features(fs.series).n == 15);

  CHECK(code_of([&] { bench_feature_scaling(FeatureCatalog::builtin(), {}, store, {}, {1}, {1, 5}); }) ==
        Errc::invalid_argument);
  CHECK(code_of([&] { bench_feature_scaling(FeatureCatalog::builtin(), {}, HistoryStore{}, candidates, {1}, {1, 5}); }) ==
        Errc::insufficient_data);
}

TEST_CASE("benchmark lock is exclusive") {
  const auto path = std::filesystem::temp_directory_path() / "riskgate-test-lock";
  {
    BenchLock first(path);
    try {
      BenchLock second(path);
      FAIL("second lock acquired");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::io_error);
    }
  }
  CHECK_NOTHROW(BenchLock{path});
  CHECK(default_lock_path().filename() == "riskgate-perfbench.lock");
}
