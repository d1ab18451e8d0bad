#pragma once

#include <optional>
#include <vector>

#include "bmdl/search.hpp"

namespace bmdl {

struct MonitorConfig {
  int start_time = 60;  // first horizon scanned; > p_max + min_regime_length
  SearchConfig search;  // per-horizon chain; iterations is the base budget

  // The per-horizon budget grows with the prefix, base * h / start_time,
  // clamped to [base, max_step_iterations].
  std::int64_t max_step_iterations = 100000;

  // 0 declares on any changepoint; w > 0 additionally requires the newest
  // changepoint to lie within the last w observations of the horizon.
  int recency_window = 0;

  bool record_horizon_trace = false;

  MonitorConfig() { search.iterations = 10000; }
};

struct HorizonRecord {
  int horizon;
  double best_bmdl;
  int best_m;
};

struct MonitorOutcome {
  bool detected = false;
  std::optional<int> detection_time;     // last index included at declaration
  std::vector<int> detected_changepoints;
  std::optional<int> run_length;         // detection_time - reference_time
  int horizons_scanned = 0;
  std::vector<HorizonRecord> horizon_trace;
};

// Carries a monitoring run across process boundaries: scanning may resume at
// last_horizon + 1 with the recorded incumbent as warm start.
struct MonitorState {
  int last_horizon = 0;
  std::optional<ChangepointModel> best;  // eta length == last_horizon
};

// Scans horizons h = start_time..n, running mh_search on the prefix 1..h with
// seed ^ h and the previous horizon's best model (extended by eta_h = 0) as
// warm start. Declares at the first horizon whose best model contains a
// changepoint (subject to recency_window) and stops. The trajectory depends
// only on the observations up to each horizon, so appending data and resuming
// via `state` reproduces a fresh full run exactly.
MonitorOutcome monitor_series(const TimeSeries& ts, const Hyperparams& hyper,
                              const MonitorConfig& config,
                              std::optional<int> reference_time = std::nullopt,
                              MonitorState* state = nullptr);

}  // namespace bmdl
