#pragma once

#include <optional>
#include <span>

#include "bmdl/monitor.hpp"
#include "bmdl/time_series.hpp"

namespace bmdl {

// Centerline and spread of the benchmark (in-control) window.
struct BenchmarkStats {
  double center = 0.0;
  double sigma = 0.0;  // sample standard deviation, divisor n-1
  int window_start = 0;
  int window_end = 0;
};

// Throws ValidationError for windows outside the series or shorter than 2,
// ScoringError when the window has zero variance.
BenchmarkStats benchmark_stats(const TimeSeries& ts, int window_start,
                               int window_end);

// Alert thresholds, in benchmark-sigma units. All comparisons are strict.
// rule3_band = 0 gives the classic run rule (8 consecutive points strictly on
// one side of the centerline); 1 demands every point beyond one sigma as
// well. The run rule is the default: the one-sigma variant fires so rarely on
// in-control data that it stops functioning as a drift detector.
struct ShewhartRules {
  double rule1_band = 4.0;  // single point beyond 4 sigma
  double rule2_band = 3.0;  // 2 of the last 3 beyond 3 sigma, same side
  double rule3_band = 0.0;  // run of rule3_run points beyond this, same side
  int rule3_run = 8;
};

// Lowest-numbered firing rule, or nullopt. Rules needing more points than
// `recent` holds are skipped (rule 2 needs 3, rule 3 needs rule3_run).
std::optional<int> shewhart_alert(std::span<const double> recent,
                                  const BenchmarkStats& stats,
                                  const ShewhartRules& rules = {});

// Scans horizons start_time..n, applying the rules to the charted points
// start_time..h at each horizon (the benchmark window only sets the limits);
// stops at the first alert. Mirrors monitor_series outcome semantics.
MonitorOutcome shewhart_monitor(const TimeSeries& ts, int bench_start,
                                int bench_end, int start_time,
                                std::optional<int> reference_time = std::nullopt,
                                const ShewhartRules& rules = {});

}  // namespace bmdl
