#include "bmdl/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "bmdl/errors.hpp"
#include "bmdl/rng.hpp"

namespace bmdl {

TimeSeries generate_scenario(const ScenarioSpec& spec) {
  if (spec.n <= spec.cp_time)
    throw ValidationError("scenario length must exceed the changepoint time");
  if (std::abs(spec.phi) >= 1.0)
    throw ValidationError("AR(1) coefficient must satisfy |phi| < 1");
  if (spec.seasonal_range < 0.0)
    throw ValidationError("seasonal range must be >= 0");

  Rng rng(spec.seed);
  const double amp = spec.seasonal_range / 2.0;
  const double sd = std::sqrt(spec.innovation_variance);

  TimeSeries ts;
  ts.period = spec.period;
  ts.values.reserve(spec.n);

  // Stationary start keeps the error process free of initialization drift.
  double eps = rng.normal() * sd / std::sqrt(1.0 - spec.phi * spec.phi);
  for (int t = 1; t <= spec.n; ++t) {
    if (t > 1) eps = spec.phi * eps + rng.normal() * sd;
    double level = spec.slope_before * t;
    if (spec.has_change && t >= spec.cp_time)
      level = spec.slope_before * spec.cp_time + spec.jump +
              spec.slope_after * (t - spec.cp_time);
    const double seasonal =
        amp * std::sin(2.0 * std::numbers::pi * t / spec.period);
    ts.values.push_back(level + seasonal + eps);
  }
  return ts;
}

std::vector<ScenarioSpec> full_grid(double phi, int n) {
  std::vector<ScenarioSpec> grid;
  const auto label = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };

  for (double slope : {0.0, 0.1, 0.2, 0.3}) {
    ScenarioSpec s;
    s.id = "nochange-slope" + label(slope);
    s.n = n;
    s.phi = phi;
    s.slope_before = slope;
    s.has_change = false;
    grid.push_back(s);
  }
  const double slope_pairs[][2] = {
      {0.0, 0.0}, {0.05, -0.05}, {0.1, -0.1}, {0.2, -0.2}, {0.3, -0.3}};
  for (const auto& pair : slope_pairs) {
    for (int jump = 10; jump >= -10; --jump) {
      if (pair[0] == 0.0 && jump == 0) continue;  // identical to no change
      ScenarioSpec s;
      s.id = "change-slope" + label(pair[0]) + "-jump" + std::to_string(jump);
      s.n = n;
      s.phi = phi;
      s.slope_before = pair[0];
      s.slope_after = pair[1];
      s.jump = jump;
      grid.push_back(s);
    }
  }
  return grid;
}

namespace {

RealizationRecord monitor_cell(const ScenarioSpec& scenario, int index, int rep,
                               const TimeSeries& ts, const StudyConfig& config,
                               std::uint64_t chain_seed) {
  MonitorConfig mc = config.monitor;
  mc.start_time = scenario.cp_time;
  mc.search.seed = chain_seed;
  const MonitorOutcome out =
      monitor_series(ts, config.hyper, mc, scenario.cp_time);
  return {index, rep, "bmdl", out.detected, out.detection_time, out.run_length};
}

RealizationRecord shewhart_cell(const ScenarioSpec& scenario, int index,
                                int rep, const TimeSeries& ts,
                                const StudyConfig& config) {
  const MonitorOutcome out =
      shewhart_monitor(ts, 1, scenario.cp_time - 1, scenario.cp_time,
                       scenario.cp_time, config.rules);
  return {index, rep, "shewhart", out.detected, out.detection_time,
          out.run_length};
}

std::optional<double> median(std::vector<int> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  if (v.size() % 2 == 1) return static_cast<double>(v[h]);
  return (v[h - 1] + v[h]) / 2.0;
}

}  // namespace

StudyResult run_study(const std::vector<ScenarioSpec>& grid,
                      const StudyConfig& config) {
  if (config.reps < 1) throw ValidationError("study needs at least one rep");
  if (grid.empty()) throw ValidationError("study grid is empty");

  std::vector<std::string> methods;
  if (config.run_bmdl) methods.push_back("bmdl");
  if (config.run_shewhart) methods.push_back("shewhart");
  if (methods.empty()) throw ValidationError("study needs at least one method");

  const int cells = static_cast<int>(grid.size()) * config.reps;
  std::vector<RealizationRecord> records(
      static_cast<std::size_t>(cells) * methods.size());

  // Cells are claimed through a shared counter and written to their own
  // slots, so the result is identical for any worker count.
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int cell = next.fetch_add(1); cell < cells; cell = next.fetch_add(1)) {
      const int index = cell / config.reps;
      const int rep = cell % config.reps;
      ScenarioSpec scenario = grid[index];
      scenario.seed = derive_seed(config.seed,
                                  static_cast<std::uint64_t>(index),
                                  static_cast<std::uint64_t>(2 * rep));
      const std::uint64_t chain_seed =
          derive_seed(config.seed, static_cast<std::uint64_t>(index),
                      static_cast<std::uint64_t>(2 * rep + 1));
      const TimeSeries ts = generate_scenario(scenario);

      std::size_t slot = static_cast<std::size_t>(cell) * methods.size();
      for (const std::string& method : methods) {
        records[slot++] =
            method == "bmdl"
                ? monitor_cell(scenario, index, rep, ts, config, chain_seed)
                : shewhart_cell(scenario, index, rep, ts, config);
      }
    }
  };

  const int workers = std::max(1, config.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  StudyResult result;
  result.realizations = std::move(records);

  for (std::size_t index = 0; index < grid.size(); ++index) {
    for (const std::string& method : methods) {
      ScenarioAggregate agg;
      agg.scenario_id = grid[index].id;
      agg.method = method;
      agg.has_change = grid[index].has_change;
      std::vector<int> run_lengths;
      for (const RealizationRecord& r : result.realizations) {
        if (r.scenario_index != static_cast<int>(index) || r.method != method)
          continue;
        ++agg.reps;
        if (r.detected) {
          ++agg.detections;
          if (r.run_length) run_lengths.push_back(*r.run_length);
        }
      }
      agg.detection_rate = static_cast<double>(agg.detections) / agg.reps;
      agg.median_run_length = median(std::move(run_lengths));
      result.aggregates.push_back(std::move(agg));
    }
  }
  return result;
}

double pooled_rate(const StudyResult& result, const std::string& method,
                   bool has_change) {
  std::int64_t total = 0, detected = 0;
  for (const ScenarioAggregate& agg : result.aggregates) {
    if (agg.method != method || agg.has_change != has_change) continue;
    total += agg.reps;
    detected += agg.detections;
  }
  return total == 0 ? 0.0 : static_cast<double>(detected) / total;
}

}  // namespace bmdl
