#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bmdl/monitor.hpp"
#include "bmdl/shewhart.hpp"
#include "bmdl/time_series.hpp"

namespace bmdl {

// One simulation cell: X_t = L(t) + S(t) + e_t with a piecewise-linear L,
// sinusoidal S of the given peak-to-trough range, and AR(1) errors started
// from their stationary distribution. L follows slope_before up to cp_time,
// where it jumps by `jump` and continues with slope_after; has_change = false
// marks the level as a single unbroken line (slope_after/jump unused).
struct ScenarioSpec {
  std::string id;
  int n = 500;
  int cp_time = 60;
  double slope_before = 0.0;
  double slope_after = 0.0;
  double jump = 0.0;
  double phi = 0.0;
  double innovation_variance = 1.0;
  double seasonal_range = 6.0;
  int period = 12;
  std::uint64_t seed = 0;
  bool has_change = true;
};

TimeSeries generate_scenario(const ScenarioSpec& spec);

// The full comparison grid at a given AR coefficient and length: 4 no-change
// rows (constant slopes 0, 0.1, 0.2, 0.3) and 104 change rows (slope pairs
// {0/0, 0.05/-0.05, 0.1/-0.1, 0.2/-0.2, 0.3/-0.3} crossed with jumps
// 10, 9, ..., -10, minus the all-zero cell), 108 scenarios total.
std::vector<ScenarioSpec> full_grid(double phi, int n);

struct RealizationRecord {
  int scenario_index = 0;
  int rep = 0;
  std::string method;  // "bmdl" or "shewhart"
  bool detected = false;
  std::optional<int> detection_time;
  std::optional<int> run_length;
};

struct ScenarioAggregate {
  std::string scenario_id;
  std::string method;
  bool has_change = false;
  int reps = 0;
  int detections = 0;
  double detection_rate = 0.0;  // false-positive rate for no-change rows
  std::optional<double> median_run_length;  // over detected reps only
};

struct StudyResult {
  std::vector<RealizationRecord> realizations;  // (scenario, rep, method) order
  std::vector<ScenarioAggregate> aggregates;
};

struct StudyConfig {
  int reps = 20;
  std::uint64_t seed = 0;
  bool run_bmdl = true;
  bool run_shewhart = true;
  Hyperparams hyper;
  MonitorConfig monitor;    // start_time is overridden by each scenario's cp_time
  ShewhartRules rules;
  int workers = 1;

  StudyConfig() { hyper = Hyperparams::defaults_for(12); }
};

// Runs every scenario x rep cell with both methods, reference_time = cp_time.
// The Shewhart benchmark window is 1..cp_time-1 (uses the true change time,
// which no real deployment knows; results files note this). Cell seeds derive
// from (seed, scenario_index, rep), so adding reps never perturbs earlier
// realizations, and cells may run on any number of workers without changing
// the result.
StudyResult run_study(const std::vector<ScenarioSpec>& grid,
                      const StudyConfig& config);

// Aggregate detection rate over a subset of scenarios (pooled reps).
double pooled_rate(const StudyResult& result, const std::string& method,
                   bool has_change);

}  // namespace bmdl
