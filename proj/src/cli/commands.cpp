#include "riskgate/cli/commands.hpp"

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "riskgate/cli/manifest.hpp"
#include "riskgate/cli/report.hpp"
#include "riskgate/core/errors.hpp"
#include "riskgate/evalsuite/calibrate.hpp"
#include "riskgate/evalsuite/replay.hpp"
#include "riskgate/evalsuite/rsr.hpp"
#include "riskgate/evalsuite/stats.hpp"
#include "riskgate/featurekit/derive.hpp"
#include "riskgate/sidecar/server.hpp"

namespace riskgate::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDatasetFile = "dataset.jsonl";
constexpr const char* kLookupFile = "ip-lookup.txt";
constexpr const char* kPoolFile = "attacker-pool.txt";
constexpr const char* kCalibrationFile = "calibration.csv";
constexpr const char* kFeatbenchJson = "featbench.json";

// Collects a command's outputs for its manifest.
class Outputs {
 public:
  explicit Outputs(fs::path root) : root_(std::move(root)) {}

  fs::path write(const fs::path& rel, const std::string& content) {
    const fs::path path = root_ / rel;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(Errc::io_error, "writing " + path.string() + " failed");
    files_.push_back(path);
    return path;
  }

  void finish(const std::string& command, const RunConfig& cfg, const std::vector<fs::path>& inputs) const {
    Manifest m;
    m.command = command;
    m.seed = cfg.seed;
    m.config = cfg.to_json();
    for (const auto& f : inputs) m.inputs.push_back(describe_file(f, root_));
    for (const auto& f : files_) m.outputs.push_back(describe_file(f, root_));
    write_manifest(root_, m);
  }

  const fs::path& root() const noexcept { return root_; }

 private:
  fs::path root_;
  std::vector<fs::path> files_;
};

fs::path require(const fs::path& path, const std::string& producer) {
  if (!fs::exists(path))
    throw Error(Errc::artifact_missing, path.string() + " not found; run '" + producer + "' first");
  return path;
}

std::string lines(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out = csv_row(header) + "\n";
  for (const auto& r : rows) out += csv_row(r) + "\n";
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::artifact_missing, "cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (row++ == 0 || line.empty()) continue;
    auto fields = parse_csv_row(line);
    if (fields.size() != columns)
      throw Error(Errc::schema_mismatch, fmt::format("{}: row {} has {} fields, expected {}", path.string(), row - 1,
                                                     fields.size(), columns),
                  row - 1);
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::size_t to_size(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used == s.size()) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw Error(Errc::schema_mismatch, "not a count: '" + s + "'");
}

fs::path legit_scores_path(const std::string& tag) { return fs::path("scores") / ("legitimate-" + tag + ".csv"); }
fs::path attack_scores_path(const std::string& tag, AttackerModel model) {
  return fs::path("scores") / ("attack-" + tag + "-" + std::string(to_string(model)) + ".csv");
}

AttackSet make_attacks(const RunConfig& cfg, const HistoryStore& store, const FeatureCatalog& catalog,
                       const RunInputs& in, AttackerModel model) {
  if (model != AttackerModel::targeted && in.pool.empty())
    throw Error(Errc::config_invalid,
                "attacker.pool: the " + std::string(to_string(model)) + " attacker needs an attacker pool");
  AttackSetConfig ac;
  ac.model = model;
  ac.per_user = cfg.attacker.attacks_per_user;
  ac.seed = cfg.seed;
  return generate_attacks(store, catalog, in.lookup ? &*in.lookup : nullptr, in.pool, in.dataset.meta.feature_names,
                          ac);
}

std::vector<ScoredLogin> read_legit_scores(const fs::path& path) {
  std::vector<ScoredLogin> out;
  for (const auto& r : read_csv(path, 4))
    out.push_back({to_size(r[0]), UserId(r[1]), to_size(r[2]), parse_double(r[3])});
  return out;
}

std::vector<double> read_attack_scores(const fs::path& path) {
  std::vector<double> out;
  for (const auto& r : read_csv(path, 4)) out.push_back(parse_double(r[3]));
  return out;
}

std::vector<std::string> engine_tags(const RunConfig& cfg) {
  std::vector<std::string> tags{"extend"};
  for (const auto& s : cfg.engine.simple) tags.push_back(SimpleEngine(s).tag());
  return tags;
}

struct CalibrationRow {
  std::string engine;
  std::string model;
  CalibrationResult result;
};

std::vector<CalibrationRow> read_calibration(const fs::path& path) {
  std::vector<CalibrationRow> out;
  for (const auto& r : read_csv(path, 6))
    out.push_back({r[0], r[1], {parse_double(r[3]), parse_double(r[2]), parse_double(r[4]), to_size(r[5])}});
  return out;
}

SidecarServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.generator = synth::PopulationConfig{};
  const FeatureCatalog builtin = FeatureCatalog::builtin();
  for (const char* name : {"ip", "ua"}) cfg.engine.weights.emplace_back(name, builtin.at(name).components());
  return cfg;
}

RunConfig resolve_config(const CommandOptions& options) {
  RunConfig cfg = options.config ? load_run_config(*options.config) : default_run_config();
  if (options.out) cfg.output = *options.out;
  if (options.seed) cfg.seed = *options.seed;
  if (cfg.generator) cfg.generator->seed = cfg.seed;
  if (const char* env = std::getenv("RISKGATE_ADDR"); env && *env) cfg.service.address = env;
  if (const char* env = std::getenv("RISKGATE_STORE"); env && *env) cfg.service.store = fs::path(env);
  if (options.address) cfg.service.address = *options.address;
  if (options.store) cfg.service.store = *options.store;
  cfg.validate();
  return cfg;
}

RunInputs load_inputs(const RunConfig& cfg) {
  RunInputs in;
  fs::path dataset;
  std::optional<fs::path> lookup, pool;
  if (cfg.generator) {
    dataset = require(cfg.output / kDatasetFile, "generate");
    lookup = require(cfg.output / kLookupFile, "generate");
    pool = require(cfg.output / kPoolFile, "generate");
  } else {
    dataset = cfg.dataset->dataset;
    lookup = cfg.dataset->lookup;
    pool = cfg.dataset->pool;
  }
  if (cfg.attacker.pool) pool = cfg.attacker.pool;
  const auto checked = [](const fs::path& p) {
    if (!fs::exists(p)) throw Error(Errc::artifact_missing, p.string() + " not found");
    return p;
  };
  in.dataset = load_dataset(checked(dataset));
  in.files.push_back(dataset);
  if (lookup) {
    in.lookup = IpLookupTable::load(checked(*lookup));
    in.files.push_back(*lookup);
  }
  if (pool) {
    in.pool = synth::AttackerPool::load(checked(*pool));
    in.files.push_back(*pool);
  }
  return in;
}

FeatureCatalog run_catalog(const RunConfig& cfg, const RunInputs& inputs) {
  FeatureCatalog catalog = FeatureCatalog::builtin();
  for (const auto& [name, subs] : cfg.engine.weights) catalog.set_subfeatures(name, subs);
  if (!inputs.lookup) {
    std::vector<std::string> rules;
    for (const auto& r : catalog.derivations())
      if (r != rules::ip) rules.push_back(r);
    catalog.set_derivations(std::move(rules));
  }
  catalog.add_passthrough(inputs.dataset.meta.feature_names);
  return catalog;
}

HistoryStore build_store(const Dataset& dataset, const FeatureCatalog& catalog, const IpLookupTable* lookup) {
  HistoryStore store;
  for (LoginEvent e : dataset.events) {
    enrich(e, catalog, lookup);
    store.append(std::move(e));
  }
  return store;
}

std::vector<std::unique_ptr<RiskEngine>> run_engines(const RunConfig& cfg, const FeatureCatalog& catalog) {
  std::vector<std::unique_ptr<RiskEngine>> engines;
  engines.push_back(std::make_unique<ExtendEngine>(catalog, cfg.engine.extend));
  for (const auto& s : cfg.engine.simple) engines.push_back(std::make_unique<SimpleEngine>(s));
  return engines;
}

void cmd_generate(const RunConfig& cfg, std::ostream& log) {
  if (!cfg.generator) throw Error(Errc::config_invalid, "generator: 'generate' needs a generator section");
  synth::PopulationConfig pc = *cfg.generator;
  pc.seed = cfg.seed;
  const synth::Population pop = synth::generate_population(pc);
  Outputs out(cfg.output);
  std::ostringstream data, pool;
  write_dataset(data, pop.dataset);
  pop.pool.write(pool);
  out.write(kDatasetFile, data.str());
  out.write(kLookupFile, pop.lookup_text);
  out.write(kPoolFile, pool.str());
  out.finish("generate", cfg, {});
  log << fmt::format("generated {} logins of {} users into {}\n", pop.dataset.events.size(),
                     pop.dataset.meta.user_count, cfg.output.string());
}

void cmd_replay(const RunConfig& cfg, std::ostream& log) {
  const RunInputs in = load_inputs(cfg);
  const FeatureCatalog catalog = run_catalog(cfg, in);
  const HistoryStore store = build_store(in.dataset, catalog, in.lookup ? &*in.lookup : nullptr);
  const auto engines = run_engines(cfg, catalog);
  Outputs out(cfg.output);

  for (const auto& engine : engines) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : score_legitimate(store, *engine))
      rows.push_back({std::to_string(s.ordinal), s.user.str(), std::to_string(s.user_ordinal), format_double(s.score)});
    out.write(legit_scores_path(engine->tag()), lines({"ordinal", "user", "user_ordinal", "score"}, rows));
  }
  for (auto model : cfg.attacker.models) {
    const AttackSet attacks = make_attacks(cfg, store, catalog, in, model);
    for (const auto& engine : engines) {
      const auto scores = score_attacks(store, *engine, attacks);
      std::vector<std::vector<std::string>> rows;
      for (std::size_t i = 0; i < attacks.size(); ++i)
        rows.push_back({std::to_string(i), attacks[i].event.user.str(), std::to_string(attacks[i].state),
                        format_double(scores[i])});
      out.write(attack_scores_path(engine->tag(), model), lines({"index", "user", "state", "score"}, rows));
    }
    log << fmt::format("scored {} {} attacks\n", attacks.size(), to_string(model));
  }
  out.finish("replay", cfg, in.files);
}

void cmd_calibrate(const RunConfig& cfg, std::ostream& log) {
  Outputs out(cfg.output);
  std::vector<fs::path> inputs;
  std::vector<std::vector<std::string>> rows;
  for (const auto& tag : engine_tags(cfg)) {
    for (auto model : cfg.attacker.models) {
      const fs::path path = require(cfg.output / attack_scores_path(tag, model), "replay");
      inputs.push_back(path);
      const auto scores = read_attack_scores(path);
      for (double target : cfg.evaluation.target_tprs) {
        const auto r = calibrate(scores, target);
        rows.push_back({tag, std::string(to_string(model)), format_double(r.target_tpr), format_double(r.threshold),
                        format_double(r.achieved_tpr), std::to_string(r.attack_score_count)});
      }
    }
  }
  out.write(kCalibrationFile,
            lines({"engine", "model", "target_tpr", "threshold", "achieved_tpr", "attack_scores"}, rows));
  out.finish("calibrate", cfg, inputs);
  log << fmt::format("wrote {} calibration rows\n", rows.size());
}

void cmd_featbench(const RunConfig& cfg, std::ostream& log) {
  const RunInputs in = load_inputs(cfg);
  const FeatureCatalog catalog = run_catalog(cfg, in);
  const HistoryStore store = build_store(in.dataset, catalog, in.lookup ? &*in.lookup : nullptr);
  const AttackSet attacks = make_attacks(cfg, store, catalog, in, AttackerModel::targeted);
  const auto rows = qualify_features(store, catalog, attacks, cfg.featbench);

  Outputs out(cfg.output);
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  std::vector<std::vector<std::string>> table;
  for (const auto& r : rows) {
    records.push_back(feature_row_json(r));
    table.push_back(feature_csv_fields(r));
  }
  out.write(kFeatbenchJson, records.dump(2) + "\n");
  out.write("featbench.csv", lines(feature_csv_header(), table));
  out.write("featbench.txt", render_feature_table(rows));
  out.finish("featbench", cfg, in.files);
  std::size_t qualified = 0;
  for (const auto& r : rows) qualified += r.category != FeatureCategory::rejected;
  log << fmt::format("benchmarked {} features, {} qualified\n", rows.size(), qualified);
}

void cmd_perfbench(const RunConfig& cfg, std::ostream& log) {
  const BenchLock lock(default_lock_path());
  const auto& pb = cfg.perfbench;

  RunInputs in;
  if (cfg.generator) {
    synth::PopulationConfig pc = *cfg.generator;
    pc.seed = cfg.seed;
    pc.users = pb.users;
    auto pop = synth::generate_population(pc);
    in.dataset = std::move(pop.dataset);
    in.lookup = std::move(pop.lookup);
    in.pool = std::move(pop.pool);
  } else {
    in = load_inputs(cfg);
  }
  const FeatureCatalog catalog = run_catalog(cfg, in);
  std::vector<LoginEvent> events = in.dataset.events;
  for (auto& e : events) enrich(e, catalog, in.lookup ? &*in.lookup : nullptr);

  Outputs out(cfg.output);
  std::vector<std::vector<std::string>> samples, medians, fits, checks;
  const auto add_series = [&](const BenchSeries& s) {
    for (std::size_t i = 0; i < s.runs.size(); ++i) {
      const auto& r = s.runs[i];
      samples.push_back({r.engine, std::to_string(r.feature_count), std::to_string(r.history_size), std::to_string(i),
                         format_double(r.elapsed_ms)});
    }
    for (const auto& m : s.medians)
      medians.push_back({m.engine, std::to_string(m.feature_count), std::to_string(m.history_size),
                         format_double(m.elapsed_ms)});
  };
  const auto add_fit = [&](const std::string& test, const std::string& tag, const RegressionFit& f) {
    fits.push_back({test, tag, format_double(f.slope), format_double(f.intercept), format_double(f.r_squared),
                    format_double(f.cohen_f), format_double(f.p_value), std::to_string(f.n)});
  };

  const auto engines = run_engines(cfg, catalog);
  for (const auto& engine : engines) {
    const BenchSeries s = bench_history_scaling(*engine, events, pb.history_sizes, pb.timing);
    add_series(s);
    const RegressionFit f = fit_history(s);
    add_fit("history", engine->tag(), f);
    if (engine->tag() == "extend") {
      checks.push_back({"extend_history_slope_positive", format_double(f.slope), "0",
                        f.slope > 0 && f.p_value < 0.05 ? "pass" : "fail"});
    } else {
      checks.push_back({engine->tag() + "_history_slope_negligible", format_double(f.slope),
                        format_double(pb.simple_slope_bound_ms),
                        std::abs(f.slope) < pb.simple_slope_bound_ms ? "pass" : "fail"});
    }
    log << fmt::format("{}: history slope {:.3g} ms/login (p {:.3g})\n", engine->tag(), f.slope, f.p_value);
  }

  HistoryStore store;
  for (const auto& e : events) {
    if (store.size() >= pb.feature_history_size) break;
    if (e.label.legitimate()) store.append(e);
  }
  if (store.size() < pb.feature_history_size)
    throw Error(Errc::insufficient_data, fmt::format("feature scaling needs {} logins, the data has {}",
                                                     pb.feature_history_size, store.size()));
  std::vector<std::string> candidates = pb.candidates;
  if (candidates.empty()) {
    for (const auto& name : catalog.names())
      if (store.view().global_distribution(catalog.at(name).primary_column()).size() > 1) candidates.push_back(name);
  }
  const FeatureScaling fs_result =
      bench_feature_scaling(catalog, cfg.engine.extend.smoothing, store, candidates, pb.feature_counts, pb.timing);
  add_series(fs_result.series);
  const RegressionFit ff = fit_features(fs_result.series);
  add_fit("features", "extend", ff);
  checks.push_back({"extend_feature_slope_positive", format_double(ff.slope), "0",
                    ff.slope > 0 && ff.p_value < 0.05 ? "pass" : "fail"});
  const double budget_median = fs_result.series.medians.back().elapsed_ms;
  checks.push_back({fmt::format("extend_latency_{}_logins_{}_features", pb.feature_history_size,
                                pb.feature_counts.back()),
                    format_double(budget_median), format_double(pb.latency_budget_ms),
                    budget_median < pb.latency_budget_ms ? "pass" : "fail"});

  std::vector<std::vector<std::string>> per_feature;
  for (std::size_t i = 0; i < fs_result.feature_medians.size(); ++i) {
    const auto& [name, med] = fs_result.feature_medians[i];
    per_feature.push_back({name, format_double(med), name == fs_result.representative ? "1" : "0"});
  }
  std::vector<std::vector<std::string>> omnibus;
  if (fs_result.feature_runs.size() >= 2) {
    const auto kw = kruskal_wallis(fs_result.feature_runs);
    omnibus.push_back({"feature_times", format_double(kw.h), std::to_string(kw.df), format_double(kw.p)});
  }

  out.write("perfbench-samples.csv", lines({"engine", "feature_count", "history_size", "run", "elapsed_ms"}, samples));
  out.write("perfbench-medians.csv", lines({"engine", "feature_count", "history_size", "median_ms"}, medians));
  out.write("perfbench-fits.csv",
            lines({"test", "engine", "slope", "intercept", "r_squared", "cohen_f", "p_value", "n"}, fits));
  out.write("perfbench-features.csv", lines({"feature", "median_ms", "representative"}, per_feature));
  out.write("perfbench-kruskal.csv", lines({"test", "h", "df", "p"}, omnibus));
  out.write("perfbench-checks.csv", lines({"check", "value", "bound", "result"}, checks));
  out.finish("perfbench", cfg, in.files);
  log << fmt::format("representative feature {}; feature slope {:.3g} ms/feature (p {:.3g})\n",
                     fs_result.representative, ff.slope, ff.p_value);
}

void cmd_report(const RunConfig& cfg, std::ostream& log) {
  const fs::path cal_path = require(cfg.output / kCalibrationFile, "calibrate");
  std::vector<fs::path> inputs{cal_path};
  const auto calibration = read_calibration(cal_path);
  std::map<std::string, std::vector<ScoredLogin>> legit;
  for (const auto& tag : engine_tags(cfg)) {
    const fs::path p = require(cfg.output / legit_scores_path(tag), "replay");
    inputs.push_back(p);
    legit[tag] = read_legit_scores(p);
  }

  const std::size_t size = cfg.evaluation.reauth_history_size;
  std::vector<ReauthRow> reauth;
  std::vector<std::vector<std::string>> reauth_rows, rate_rows;
  for (const auto& c : calibration) {
    const auto it = legit.find(c.engine);
    if (it == legit.end()) continue;
    const ReplayOutcome outcome = apply_threshold(it->second, c.result.threshold);
    ReauthRow row{c.engine, c.model, c.result.target_tpr, c.result.achieved_tpr, c.result.threshold, size, 0,
                  NAN, NAN, required_history_size(outcome.aggregates, cfg.evaluation.min_users_per_bucket)};
    for (const auto& a : outcome.aggregates) {
      rate_rows.push_back({c.engine, c.model, format_double(c.result.target_tpr), std::to_string(a.size),
                           std::to_string(a.users), format_double(a.median_count), format_double(a.median_rate)});
      if (a.size == size) {
        row.users = a.users;
        row.median_count = a.median_count;
        row.logins_until_reauth = logins_until_reauth(size, a.median_count);
      }
    }
    reauth_rows.push_back(reauth_csv_fields(row));
    reauth.push_back(std::move(row));
  }

  std::string text;
  for (auto model : cfg.attacker.models) text += render_reauth_table(reauth, to_string(model)) + "\n";
  const fs::path fb = cfg.output / kFeatbenchJson;
  if (fs::exists(fb)) {
    inputs.push_back(fb);
    std::ifstream f(fb);
    nlohmann::json records;
    try {
      records = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::schema_mismatch, fb.string() + ": " + e.what());
    }
    std::vector<FeatureBenchmarkRow> rows;
    for (const auto& r : records) rows.push_back(feature_row_from_json(r));
    text += render_feature_table(rows);
  }

  Outputs out(cfg.output);
  out.write(fs::path("report") / "reauth.csv", lines(reauth_csv_header(), reauth_rows));
  out.write(fs::path("report") / "rates.csv",
            lines({"engine", "model", "target_tpr", "history_size", "users", "median_count", "median_rate"}, rate_rows));
  out.write(fs::path("report") / "report.txt", text);
  out.finish("report", cfg, inputs);
  log << text;
}

void cmd_serve(const RunConfig& cfg, std::ostream& log) {
  const fs::path cal_path = require(cfg.output / kCalibrationFile, "calibrate");
  const auto calibration = read_calibration(cal_path);
  const auto threshold_for = [&](const std::string& tag) {
    for (const auto& c : calibration)
      if (c.engine == tag && c.model == to_string(cfg.service.threshold_model) &&
          c.result.target_tpr == cfg.service.threshold_tpr)
        return c.result.threshold;
    throw Error(Errc::artifact_missing,
                fmt::format("{} has no row for {} / {} / TPR {}", cal_path.string(), tag,
                            to_string(cfg.service.threshold_model), cfg.service.threshold_tpr));
  };

  RunInputs in = load_inputs(cfg);
  ServiceConfig sc;
  sc.catalog = run_catalog(cfg, in);
  sc.extend = cfg.engine.extend;
  sc.extend_threshold = threshold_for("extend");
  if (!cfg.engine.simple.empty()) {
    sc.simple = cfg.engine.simple.front();
    sc.simple_threshold = threshold_for(SimpleEngine(sc.simple).tag());
  }
  sc.default_engine = cfg.service.default_engine;
  sc.lookup = in.lookup;
  sc.hash_values = cfg.service.hash_values;
  sc.hash_salt = cfg.service.hash_salt;
  sc.store_path = cfg.service.store;
  HistoryStore history = build_store(in.dataset, sc.catalog, in.lookup ? &*in.lookup : nullptr);
  ScoringService service(std::move(sc), std::move(history));

  const auto [host, port] = split_address(cfg.service.address);
  SidecarServer server(service);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  log << fmt::format("serving {} logins on {}:{}\n", service.history_size(), host, port) << std::flush;
  server.run(host, port);
  g_server = nullptr;
}

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::config_invalid:
    case Errc::invalid_config:
    case Errc::weight_sum_invalid:
    case Errc::unknown_feature:
    case Errc::empty_feature_set:
      return kExitConfig;
    case Errc::artifact_missing:
    case Errc::schema_mismatch:
    case Errc::empty_dataset:
    case Errc::io_error:
      return kExitArtifact;
    default:
      return kExitFailure;
  }
}

int run_command(std::string_view name, const CommandOptions& options, std::ostream& log, std::ostream& err) {
  using Fn = void (*)(const RunConfig&, std::ostream&);
  static const std::map<std::string, Fn, std::less<>> commands = {
      {"generate", cmd_generate}, {"replay", cmd_replay},       {"calibrate", cmd_calibrate},
      {"featbench", cmd_featbench}, {"perfbench", cmd_perfbench}, {"report", cmd_report},
      {"serve", cmd_serve}};
  const auto it = commands.find(name);
  if (it == commands.end()) {
    err << "unknown command '" << name << "'\n";
    return kExitConfig;
  }
  try {
    const RunConfig cfg = resolve_config(options);
    it->second(cfg, log);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace riskgate::cli
