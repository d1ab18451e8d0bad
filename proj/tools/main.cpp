#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "bmdl/csv.hpp"
#include "bmdl/errors.hpp"
#include "bmdl/monitor.hpp"
#include "bmdl/report.hpp"
#include "bmdl/rng.hpp"
#include "bmdl/search.hpp"
#include "bmdl/shewhart.hpp"
#include "bmdl/simulate.hpp"
#include "bmdl/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Flags shared by every subcommand that scores models.
struct CommonOpts {
  std::string input;
  std::string out_dir;
  int period = 12;
  int kmax = -1;  // <0: derive from the period
  int pmax = 5;
  double nu = 0.0;  // 0: resolve to the series length
  double a = 1.0;
  double b = 19.0;
  int min_regime = 2;
  std::uint64_t seed = 0;
};

bmdl::Hyperparams to_hyper(const CommonOpts& opts) {
  bmdl::Hyperparams hyper = bmdl::Hyperparams::defaults_for(opts.period);
  if (opts.kmax >= 0) hyper.k_max = opts.kmax;
  hyper.p_max = opts.pmax;
  hyper.nu = opts.nu;
  hyper.a = opts.a;
  hyper.b = opts.b;
  hyper.min_regime_length = opts.min_regime;
  return hyper;
}

void add_hyper_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--period", opts.period, "Observations per seasonal cycle")
      ->capture_default_str();
  cmd->add_option("--kmax", opts.kmax,
                  "Largest harmonic order (default (period-1)/2)");
  cmd->add_option("--pmax", opts.pmax, "Largest AR order")
      ->capture_default_str();
  cmd->add_option("--nu", opts.nu,
                  "Prior scale of regime coefficients; 0 = series length")
      ->capture_default_str();
  cmd->add_option("--a", opts.a, "Beta prior a for changepoint probability")
      ->capture_default_str();
  cmd->add_option("--b", opts.b, "Beta prior b for changepoint probability")
      ->capture_default_str();
  cmd->add_option("--min-regime", opts.min_regime,
                  "Shortest allowed regime inside the fit window")
      ->capture_default_str();
  cmd->add_option("--seed", opts.seed, "Master seed; all randomness derives from it")
      ->capture_default_str();
}

json hyper_json(const bmdl::Hyperparams& hyper) {
  return json{{"nu", hyper.nu},       {"a", hyper.a},
              {"b", hyper.b},         {"k_max", hyper.k_max},
              {"p_max", hyper.p_max}, {"min_regime_length", hyper.min_regime_length}};
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

// Reproducibility record dropped next to every output. Timings live only
// here, so the data files stay byte-identical across reruns.
void write_manifest(const fs::path& dir, const std::string& command,
                    const std::vector<std::string>& argv,
                    const std::vector<std::string>& inputs, const json& params,
                    const std::vector<std::string>& outputs, double seconds) {
  json doc{{"command", command},
           {"argv", argv},
           {"version", bmdl::version},
           {"inputs", inputs},
           {"params", params},
           {"outputs", outputs},
           {"timings", {{"total_seconds", std::round(seconds * 1000.0) / 1000.0}}}};
  write_text(dir / "manifest.json", doc.dump(2) + "\n");
}

std::string file_stem(const std::string& name) {
  std::string stem = name.empty() ? "series" : name;
  for (char& c : stem) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!ok) c = '_';
  }
  return stem;
}

std::string display_name(const std::string& name) {
  return name.empty() ? "series" : name;
}

json opt_json(const std::optional<int>& v) {
  return v ? json(*v) : json(nullptr);
}

std::uint64_t prefix_hash(const std::vector<double>& values, int h) {
  std::uint64_t acc = 0x9e3779b97f4a7c15ULL;
  for (int i = 0; i < h; ++i)
    acc = bmdl::splitmix64(acc ^ std::bit_cast<std::uint64_t>(values[i]));
  return acc;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---------------------------------------------------------------- detect ---

struct DetectOpts {
  CommonOpts common;
  std::int64_t iters = 100000;
  int workers = 1;
};

int run_detect(const DetectOpts& opts, const std::vector<std::string>& argv) {
  const auto t0 = std::chrono::steady_clock::now();
  const bmdl::Hyperparams hyper = to_hyper(opts.common);
  const std::vector<bmdl::ParsedSeries> parsed =
      bmdl::parse_csv_file(opts.common.input, opts.common.period);

  fs::create_directories(opts.common.out_dir);
  const fs::path dir(opts.common.out_dir);

  struct Item {
    bmdl::FitResult fit;
    std::exception_ptr error;
  };
  std::vector<Item> items(parsed.size());

  // Series are claimed through a counter and written to their own slots, so
  // the outputs cannot depend on the worker count.
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < parsed.size();
         i = next.fetch_add(1)) {
      try {
        bmdl::validate_series(parsed[i].series, hyper);
        bmdl::SearchConfig config;
        config.iterations = opts.iters;
        config.seed = bmdl::derive_seed(opts.common.seed, i);
        const bmdl::SearchResult res =
            bmdl::mh_search(parsed[i].series, hyper, config);
        items[i].fit = bmdl::fit_report(parsed[i].series, res.best, hyper);
      } catch (const bmdl::ScoringError& e) {
        items[i].error = std::make_exception_ptr(bmdl::ScoringError(
            "series '" + display_name(parsed[i].name) + "': " + e.what()));
      } catch (...) {
        items[i].error = std::current_exception();
      }
    }
  };
  const int workers =
      std::max(1, std::min<int>(opts.workers, static_cast<int>(parsed.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const Item& item : items)
    if (item.error) std::rethrow_exception(item.error);

  std::vector<std::string> outputs;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    const std::string stem = file_stem(parsed[i].name);
    const bmdl::FitResult& fit = items[i].fit;
    write_text(dir / (stem + ".json"),
               bmdl::to_json(fit, display_name(parsed[i].name)));
    write_text(dir / (stem + ".plot.csv"), bmdl::plot_csv(parsed[i].series, fit));
    outputs.push_back(stem + ".json");
    outputs.push_back(stem + ".plot.csv");

    std::string cps;
    for (std::size_t c = 0; c < fit.changepoint_times.size(); ++c) {
      cps += (c ? ", " : "") + std::to_string(fit.changepoint_times[c]) + " (" +
             fit.changepoint_labels[c] + ")";
    }
    std::printf("%s: %zu changepoint%s%s%s; k=%d p=%d sigma2=%.4f bmdl=%.4f\n",
                display_name(parsed[i].name).c_str(),
                fit.changepoint_times.size(),
                fit.changepoint_times.size() == 1 ? "" : "s",
                cps.empty() ? "" : " at ", cps.c_str(), fit.k, fit.p,
                fit.sigma2_hat, fit.bmdl);
  }

  json params = hyper_json(hyper);
  params["period"] = opts.common.period;
  params["iterations"] = opts.iters;
  params["seed"] = opts.common.seed;
  params["workers"] = opts.workers;
  write_manifest(dir, "detect", argv, {opts.common.input}, params, outputs,
                 elapsed_seconds(t0));
  return 0;
}

// --------------------------------------------------------------- monitor ---

struct MonitorOpts {
  CommonOpts common;
  int start = 60;
  std::optional<int> reference;
  std::string state_path;
  std::int64_t iters = 10000;
  std::int64_t cap = 100000;
  int recency = 0;
};

json monitor_fingerprint(const MonitorOpts& opts, const bmdl::Hyperparams& hyper,
                         const std::string& series_name) {
  json fp = hyper_json(hyper);
  fp["period"] = opts.common.period;
  fp["seed"] = opts.common.seed;
  fp["start"] = opts.start;
  fp["iterations"] = opts.iters;
  fp["max_step_iterations"] = opts.cap;
  fp["recency_window"] = opts.recency;
  fp["series"] = series_name;
  return fp;
}

int run_monitor(const MonitorOpts& opts, const std::vector<std::string>& argv) {
  const auto t0 = std::chrono::steady_clock::now();
  const bmdl::Hyperparams hyper = to_hyper(opts.common);
  const std::vector<bmdl::ParsedSeries> parsed =
      bmdl::parse_csv_file(opts.common.input, opts.common.period);
  if (parsed.size() != 1)
    throw bmdl::ValidationError("monitor expects a single-series input");
  const bmdl::TimeSeries& ts = parsed[0].series;
  const std::string name = display_name(parsed[0].name);

  bmdl::MonitorConfig config;
  config.start_time = opts.start;
  config.search.seed = opts.common.seed;
  config.search.iterations = opts.iters;
  config.max_step_iterations = opts.cap;
  config.recency_window = opts.recency;

  const json fingerprint = monitor_fingerprint(opts, hyper, parsed[0].name);
  bmdl::MonitorState state;
  bmdl::MonitorOutcome outcome;
  bool already_detected = false;

  if (!opts.state_path.empty() && fs::exists(opts.state_path)) {
    std::ifstream in(opts.state_path);
    json saved;
    in >> saved;
    if (saved.at("fingerprint") != fingerprint)
      throw bmdl::ValidationError(
          "state file settings do not match this invocation");
    const int last = saved.at("last_horizon").get<int>();
    if (last > ts.n())
      throw bmdl::ValidationError("state file is ahead of the input series");
    if (saved.at("prefix_hash").get<std::string>() !=
        hex64(prefix_hash(ts.values, last)))
      throw bmdl::ValidationError(
          "state file does not match the input series values");

    state.last_horizon = last;
    bmdl::ChangepointModel best = bmdl::ChangepointModel::null_model(last);
    for (const int t : saved.at("best").at("changepoints"))
      best.eta[static_cast<std::size_t>(t) - 1] = 1;
    best.k = saved.at("best").at("k").get<int>();
    best.p = saved.at("best").at("p").get<int>();
    state.best = std::move(best);

    const json& prior = saved.at("outcome");
    if (prior.at("detected").get<bool>()) {
      // Monitoring stopped at the recorded horizon; nothing left to scan.
      already_detected = true;
      outcome.detected = true;
      outcome.detection_time = prior.at("detection_time").get<int>();
      outcome.detected_changepoints =
          prior.at("changepoints").get<std::vector<int>>();
      if (opts.reference && *opts.reference <= *outcome.detection_time)
        outcome.run_length = *outcome.detection_time - *opts.reference;
    }
  }

  if (!already_detected)
    outcome = bmdl::monitor_series(ts, hyper, config, opts.reference, &state);

  fs::create_directories(opts.common.out_dir);
  const fs::path dir(opts.common.out_dir);

  json doc{{"series", name},
           {"start", opts.start},
           {"reference", opt_json(opts.reference)},
           {"detected", outcome.detected},
           {"detection_time", opt_json(outcome.detection_time)},
           {"detection_label", outcome.detection_time
                                   ? json(ts.label(*outcome.detection_time))
                                   : json(nullptr)},
           {"changepoints", outcome.detected_changepoints},
           {"run_length", opt_json(outcome.run_length)},
           {"horizons_scanned", outcome.horizons_scanned}};
  json labels = json::array();
  for (const int t : outcome.detected_changepoints) labels.push_back(ts.label(t));
  doc["changepoint_labels"] = labels;
  write_text(dir / "monitor.json", doc.dump(2) + "\n");

  if (!opts.state_path.empty()) {
    json best{{"changepoints", json::array()}, {"k", 0}, {"p", 0}};
    if (state.best) {
      best["changepoints"] = bmdl::changepoint_times(state.best->eta);
      best["k"] = state.best->k;
      best["p"] = state.best->p;
    }
    json out_state{{"detected", outcome.detected}};
    if (outcome.detected) {
      out_state["detection_time"] = *outcome.detection_time;
      out_state["changepoints"] = outcome.detected_changepoints;
    }
    json saved{{"fingerprint", fingerprint},
               {"last_horizon", state.last_horizon},
               {"prefix_hash", hex64(prefix_hash(ts.values, state.last_horizon))},
               {"best", best},
               {"outcome", out_state}};
    write_text(opts.state_path, saved.dump(2) + "\n");
  }

  if (outcome.detected) {
    std::printf("%s: detection at t=%d (%s)", name.c_str(),
                *outcome.detection_time,
                ts.label(*outcome.detection_time).c_str());
    if (outcome.run_length) std::printf(", run length %d", *outcome.run_length);
    std::printf("\n");
  } else {
    std::printf("%s: no detection through t=%d\n", name.c_str(), ts.n());
  }

  json params = hyper_json(hyper);
  params["period"] = opts.common.period;
  params["seed"] = opts.common.seed;
  params["start"] = opts.start;
  params["reference"] = opt_json(opts.reference);
  params["iterations"] = opts.iters;
  params["max_step_iterations"] = opts.cap;
  params["recency_window"] = opts.recency;
  params["state_file"] = opts.state_path;
  write_manifest(dir, "monitor", argv, {opts.common.input}, params,
                 {"monitor.json"}, elapsed_seconds(t0));
  return 0;
}

// -------------------------------------------------------------- simulate ---

struct SimulateOpts {
  CommonOpts common;
  std::string grid = "full";
  int reps = 20;
  double phi = 0.3;
  int n = 500;
  int cp_time = 60;
  std::int64_t iters = 10000;
  std::int64_t cap = 100000;
  int workers = 1;
};

std::vector<bmdl::ScenarioSpec> build_grid(const SimulateOpts& opts) {
  std::vector<bmdl::ScenarioSpec> grid = bmdl::full_grid(opts.phi, opts.n);
  for (bmdl::ScenarioSpec& s : grid) s.cp_time = opts.cp_time;
  if (opts.grid == "full") return grid;
  if (opts.grid == "desk") {
    // Small fixed subset for quick runs: both regimes of behavior, strong and
    // weak jumps, a pure slope change.
    const std::set<std::string> keep{
        "nochange-slope0",         "nochange-slope0.2",
        "change-slope0-jump10",    "change-slope0-jump5",
        "change-slope0-jump1",     "change-slope0-jump-5",
        "change-slope0.1-jump0",   "change-slope0.3-jump-10"};
    std::vector<bmdl::ScenarioSpec> subset;
    for (const bmdl::ScenarioSpec& s : grid)
      if (keep.contains(s.id)) subset.push_back(s);
    return subset;
  }
  throw bmdl::ValidationError("unknown grid '" + opts.grid +
                              "' (expected 'full' or 'desk')");
}

std::string realizations_csv(const std::vector<bmdl::ScenarioSpec>& grid,
                             const bmdl::StudyResult& result) {
  std::string out = "scenario,rep,method,detected,detection_time,run_length\n";
  for (const bmdl::RealizationRecord& r : result.realizations) {
    out += grid[static_cast<std::size_t>(r.scenario_index)].id;
    out += ',' + std::to_string(r.rep) + ',' + r.method + ',';
    out += r.detected ? '1' : '0';
    out += ',';
    if (r.detection_time) out += std::to_string(*r.detection_time);
    out += ',';
    if (r.run_length) out += std::to_string(*r.run_length);
    out += '\n';
  }
  return out;
}

int run_simulate(const SimulateOpts& opts, const std::vector<std::string>& argv) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<bmdl::ScenarioSpec> grid = build_grid(opts);

  bmdl::StudyConfig config;
  config.reps = opts.reps;
  config.seed = opts.common.seed;
  config.hyper = to_hyper(opts.common);
  config.monitor.search.iterations = opts.iters;
  config.monitor.max_step_iterations = opts.cap;
  config.workers = opts.workers;
  const bmdl::StudyResult result = bmdl::run_study(grid, config);

  fs::create_directories(opts.common.out_dir);
  const fs::path dir(opts.common.out_dir);
  write_text(dir / "results.csv", realizations_csv(grid, result));

  bool any_change = false, any_null = false;
  for (const bmdl::ScenarioSpec& s : grid)
    (s.has_change ? any_change : any_null) = true;

  json aggregates = json::array();
  for (const bmdl::ScenarioAggregate& agg : result.aggregates) {
    aggregates.push_back(
        {{"scenario", agg.scenario_id},
         {"method", agg.method},
         {"has_change", agg.has_change},
         {"reps", agg.reps},
         {"detections", agg.detections},
         {"detection_rate", agg.detection_rate},
         {"median_run_length", agg.median_run_length
                                   ? json(*agg.median_run_length)
                                   : json(nullptr)}});
  }
  json pooled;
  for (const std::string method : {"bmdl", "shewhart"}) {
    pooled[method] = {
        {"false_positive_rate",
         any_null ? json(bmdl::pooled_rate(result, method, false)) : json(nullptr)},
        {"detection_rate",
         any_change ? json(bmdl::pooled_rate(result, method, true)) : json(nullptr)}};
  }
  json summary{
      {"grid", opts.grid},
      {"scenarios", grid.size()},
      {"reps", opts.reps},
      {"seed", opts.common.seed},
      {"phi", opts.phi},
      {"n", opts.n},
      {"cp_time", opts.cp_time},
      {"note",
       "the Shewhart benchmark window ends at the true change time, which no "
       "real deployment would know in advance"},
      {"pooled", pooled},
      {"aggregates", aggregates}};
  write_text(dir / "summary.json", summary.dump(2) + "\n");

  for (const std::string method : {"bmdl", "shewhart"}) {
    std::printf("%s:", method.c_str());
    if (any_null)
      std::printf(" false positives %.1f%%",
                  100.0 * bmdl::pooled_rate(result, method, false));
    if (any_change)
      std::printf(" detections %.1f%%",
                  100.0 * bmdl::pooled_rate(result, method, true));
    std::printf("\n");
  }

  json params = hyper_json(config.hyper);
  params["grid"] = opts.grid;
  params["reps"] = opts.reps;
  params["seed"] = opts.common.seed;
  params["phi"] = opts.phi;
  params["n"] = opts.n;
  params["cp_time"] = opts.cp_time;
  params["iterations"] = opts.iters;
  params["max_step_iterations"] = opts.cap;
  params["workers"] = opts.workers;
  write_manifest(dir, "simulate", argv, {}, params,
                 {"results.csv", "summary.json"}, elapsed_seconds(t0));
  return 0;
}

// -------------------------------------------------------------- baseline ---

struct BaselineOpts {
  CommonOpts common;
  int bench_start = 1;
  int bench_end = 0;
  int start = 60;
  std::optional<int> reference;
  bmdl::ShewhartRules rules;
};

int run_baseline(const BaselineOpts& opts, const std::vector<std::string>& argv) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<bmdl::ParsedSeries> parsed =
      bmdl::parse_csv_file(opts.common.input, opts.common.period);
  if (parsed.size() != 1)
    throw bmdl::ValidationError("baseline expects a single-series input");
  const bmdl::TimeSeries& ts = parsed[0].series;
  const std::string name = display_name(parsed[0].name);

  const bmdl::BenchmarkStats stats =
      bmdl::benchmark_stats(ts, opts.bench_start, opts.bench_end);
  const bmdl::MonitorOutcome outcome =
      bmdl::shewhart_monitor(ts, opts.bench_start, opts.bench_end, opts.start,
                             opts.reference, opts.rules);

  std::optional<int> rule;
  if (outcome.detection_time) {
    const std::span<const double> seen(
        ts.values.data(), static_cast<std::size_t>(*outcome.detection_time));
    rule = bmdl::shewhart_alert(seen, stats, opts.rules);
  }

  fs::create_directories(opts.common.out_dir);
  const fs::path dir(opts.common.out_dir);
  json doc{{"series", name},
           {"benchmark",
            {{"center", stats.center},
             {"sigma", stats.sigma},
             {"window", {stats.window_start, stats.window_end}}}},
           {"start", opts.start},
           {"reference", opt_json(opts.reference)},
           {"detected", outcome.detected},
           {"detection_time", opt_json(outcome.detection_time)},
           {"detection_label", outcome.detection_time
                                   ? json(ts.label(*outcome.detection_time))
                                   : json(nullptr)},
           {"rule", opt_json(rule)},
           {"run_length", opt_json(outcome.run_length)},
           {"horizons_scanned", outcome.horizons_scanned}};
  write_text(dir / "baseline.json", doc.dump(2) + "\n");

  if (outcome.detected)
    std::printf("%s: rule %d alert at t=%d (%s)\n", name.c_str(),
                rule.value_or(0), *outcome.detection_time,
                ts.label(*outcome.detection_time).c_str());
  else
    std::printf("%s: no alert through t=%d\n", name.c_str(), ts.n());

  json params{{"period", opts.common.period},
              {"bench_start", opts.bench_start},
              {"bench_end", opts.bench_end},
              {"start", opts.start},
              {"reference", opt_json(opts.reference)},
              {"rule1_band", opts.rules.rule1_band},
              {"rule2_band", opts.rules.rule2_band},
              {"rule3_band", opts.rules.rule3_band},
              {"rule3_run", opts.rules.rule3_run}};
  write_manifest(dir, "baseline", argv, {opts.common.input}, params,
                 {"baseline.json"}, elapsed_seconds(t0));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> argv_copy(argv, argv + argc);

  CLI::App app{"Changepoint detection for seasonal time series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bmdl::version);

  DetectOpts detect;
  CLI::App* cmd_detect = app.add_subcommand(
      "detect", "Locate changepoints in one or more series");
  cmd_detect->add_option("input", detect.common.input, "CSV file to analyze")
      ->required();
  cmd_detect->add_option("--out", detect.common.out_dir, "Output directory")
      ->required();
  add_hyper_flags(cmd_detect, detect.common);
  cmd_detect->add_option("--iters", detect.iters, "Search chain length")
      ->capture_default_str();
  cmd_detect->add_option("--workers", detect.workers,
                         "Threads for batch inputs")
      ->capture_default_str();

  MonitorOpts monitor;
  CLI::App* cmd_monitor = app.add_subcommand(
      "monitor", "Scan a growing series and stop at the first changepoint");
  cmd_monitor->add_option("input", monitor.common.input, "CSV file to monitor")
      ->required();
  cmd_monitor->add_option("--out", monitor.common.out_dir, "Output directory")
      ->required();
  cmd_monitor->add_option("--start", monitor.start, "First horizon to scan")
      ->capture_default_str();
  cmd_monitor->add_option("--reference", monitor.reference,
                          "True change time for run-length reporting");
  cmd_monitor->add_option("--state", monitor.state_path,
                          "State file for resuming an earlier scan");
  add_hyper_flags(cmd_monitor, monitor.common);
  cmd_monitor->add_option("--iters", monitor.iters, "Base per-horizon chain length")
      ->capture_default_str();
  cmd_monitor->add_option("--cap", monitor.cap, "Per-horizon chain cap")
      ->capture_default_str();
  cmd_monitor
      ->add_option("--recency", monitor.recency,
                   "Only declare on changepoints within this many recent points")
      ->capture_default_str();

  SimulateOpts simulate;
  CLI::App* cmd_simulate = app.add_subcommand(
      "simulate", "Run the comparative detection study on synthetic data");
  cmd_simulate->add_option("--out", simulate.common.out_dir, "Output directory")
      ->required();
  cmd_simulate->add_option("--grid", simulate.grid, "Scenario grid: full or desk")
      ->required();
  cmd_simulate->add_option("--reps", simulate.reps, "Realizations per scenario")
      ->capture_default_str();
  cmd_simulate->add_option("--phi", simulate.phi, "AR(1) coefficient of the errors")
      ->capture_default_str();
  cmd_simulate->add_option("--n", simulate.n, "Length of each series")
      ->capture_default_str();
  cmd_simulate->add_option("--cp", simulate.cp_time, "Change time in each scenario")
      ->capture_default_str();
  add_hyper_flags(cmd_simulate, simulate.common);
  cmd_simulate->add_option("--iters", simulate.iters, "Base per-horizon chain length")
      ->capture_default_str();
  cmd_simulate->add_option("--cap", simulate.cap, "Per-horizon chain cap")
      ->capture_default_str();
  cmd_simulate->add_option("--workers", simulate.workers, "Worker threads")
      ->capture_default_str();

  BaselineOpts baseline;
  CLI::App* cmd_baseline = app.add_subcommand(
      "baseline", "Shewhart control-chart monitoring of one series");
  cmd_baseline->add_option("input", baseline.common.input, "CSV file to monitor")
      ->required();
  cmd_baseline->add_option("--out", baseline.common.out_dir, "Output directory")
      ->required();
  cmd_baseline
      ->add_option("--bench-start", baseline.bench_start,
                   "First index of the in-control window")
      ->capture_default_str();
  cmd_baseline
      ->add_option("--bench-end", baseline.bench_end,
                   "Last index of the in-control window")
      ->required();
  cmd_baseline->add_option("--start", baseline.start, "First horizon to scan")
      ->capture_default_str();
  cmd_baseline->add_option("--reference", baseline.reference,
                           "True change time for run-length reporting");
  cmd_baseline->add_option("--period", baseline.common.period,
                           "Observations per seasonal cycle")
      ->capture_default_str();
  cmd_baseline->add_option("--rule1", baseline.rules.rule1_band,
                           "Sigma band for the single-point rule")
      ->capture_default_str();
  cmd_baseline->add_option("--rule2", baseline.rules.rule2_band,
                           "Sigma band for the 2-of-3 rule")
      ->capture_default_str();
  cmd_baseline->add_option("--rule3", baseline.rules.rule3_band,
                           "Sigma band for the run rule (0 = side of centerline)")
      ->capture_default_str();
  cmd_baseline->add_option("--rule3-run", baseline.rules.rule3_run,
                           "Run length for rule 3")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (cmd_detect->parsed()) return run_detect(detect, argv_copy);
    if (cmd_monitor->parsed()) return run_monitor(monitor, argv_copy);
    if (cmd_simulate->parsed()) return run_simulate(simulate, argv_copy);
    if (cmd_baseline->parsed()) return run_baseline(baseline, argv_copy);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const bmdl::ParseError& e) {
    if (e.line > 0)
      std::fprintf(stderr, "error: line %d: %s\n", e.line, e.what());
    else
      std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const bmdl::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const bmdl::ScoringError& e) {
    std::fprintf(stderr, "scoring error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
