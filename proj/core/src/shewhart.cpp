#include "bmdl/shewhart.hpp"

#include <cmath>
#include <string>

#include "bmdl/errors.hpp"

namespace bmdl {

BenchmarkStats benchmark_stats(const TimeSeries& ts, int window_start,
                               int window_end) {
  if (window_start < 1 || window_end > ts.n() || window_end - window_start + 1 < 2)
    throw ValidationError("benchmark window must hold at least 2 points inside the series");
  const int len = window_end - window_start + 1;
  double mean = 0.0;
  for (int t = window_start; t <= window_end; ++t) mean += ts.at(t);
  mean /= len;
  double ss = 0.0;
  for (int t = window_start; t <= window_end; ++t) {
    const double d = ts.at(t) - mean;
    ss += d * d;
  }
  if (ss <= 0.0) throw ScoringError("benchmark window has zero variance");
  return {mean, std::sqrt(ss / (len - 1)), window_start, window_end};
}

std::optional<int> shewhart_alert(std::span<const double> recent,
                                  const BenchmarkStats& stats,
                                  const ShewhartRules& rules) {
  const auto len = recent.size();
  if (len == 0) return std::nullopt;
  const double c = stats.center;
  const double s = stats.sigma;

  if (std::abs(recent[len - 1] - c) > rules.rule1_band * s) return 1;

  if (len >= 3) {
    int above = 0, below = 0;
    for (auto i = len - 3; i < len; ++i) {
      if (recent[i] - c > rules.rule2_band * s) ++above;
      if (c - recent[i] > rules.rule2_band * s) ++below;
    }
    if (above >= 2 || below >= 2) return 2;
  }

  const auto run = static_cast<std::size_t>(rules.rule3_run);
  if (len >= run) {
    bool above = true, below = true;
    for (auto i = len - run; i < len; ++i) {
      above = above && recent[i] - c > rules.rule3_band * s;
      below = below && c - recent[i] > rules.rule3_band * s;
    }
    if (above || below) return 3;
  }
  return std::nullopt;
}

MonitorOutcome shewhart_monitor(const TimeSeries& ts, int bench_start,
                                int bench_end, int start_time,
                                std::optional<int> reference_time,
                                const ShewhartRules& rules) {
  if (start_time < 1 || start_time > ts.n())
    throw ValidationError("monitoring start is outside the series");
  const BenchmarkStats stats = benchmark_stats(ts, bench_start, bench_end);

  MonitorOutcome out;
  for (int h = start_time; h <= ts.n(); ++h) {
    ++out.horizons_scanned;
    // The rules read only the charted points start_time..h; the benchmark
    // window supplies center/sigma. A fresh chart starts with no history, so
    // rule 3 cannot fire before start_time + rule3_run - 1.
    const std::span<const double> charted(
        ts.values.data() + (start_time - 1),
        static_cast<std::size_t>(h - start_time + 1));
    if (shewhart_alert(charted, stats, rules)) {
      out.detected = true;
      out.detection_time = h;
      if (reference_time && *reference_time <= h)
        out.run_length = h - *reference_time;
      break;
    }
  }
  return out;
}

}  // namespace bmdl
