#include "bmdl/monitor.hpp"

#include <algorithm>
#include <cmath>

#include "bmdl/errors.hpp"

namespace bmdl {

namespace {

std::int64_t horizon_budget(const MonitorConfig& config, int h) {
  const double base = static_cast<double>(config.search.iterations);
  const double scaled = std::round(base * h / config.start_time);
  return std::clamp(static_cast<std::int64_t>(scaled),
                    config.search.iterations, config.max_step_iterations);
}

}  // namespace

MonitorOutcome monitor_series(const TimeSeries& ts, const Hyperparams& hyper,
                              const MonitorConfig& config,
                              std::optional<int> reference_time,
                              MonitorState* state) {
  const int n = ts.n();
  if (config.start_time <= hyper.p_max + hyper.min_regime_length)
    throw ValidationError("monitoring must start after p_max + min_regime_length");
  if (n < config.start_time)
    throw ValidationError("series is shorter than the monitoring start");
  if (config.max_step_iterations < config.search.iterations)
    throw ValidationError("per-step iteration cap is below the base budget");

  MonitorOutcome out;
  int first = config.start_time;
  std::optional<ChangepointModel> warm;
  if (state && state->last_horizon >= config.start_time) {
    first = state->last_horizon + 1;
    warm = state->best;
  }

  for (int h = first; h <= n; ++h) {
    ++out.horizons_scanned;

    SearchConfig step = config.search;
    step.seed = config.search.seed ^ static_cast<std::uint64_t>(h);
    step.iterations = horizon_budget(config, h);
    // Warm start: the previous horizon's incumbent, with the new time marked
    // as a non-changepoint. mh_search falls back to null if it is invalid.
    if (warm) {
      ChangepointModel carried = *warm;
      carried.eta.resize(h, 0);
      step.start = std::move(carried);
    }

    const SearchResult res = mh_search(ts.prefix(h), hyper, step);
    warm = res.best.model;
    if (state) {
      state->last_horizon = h;
      state->best = res.best.model;
    }
    if (config.record_horizon_trace)
      out.horizon_trace.push_back(
          {h, res.best.bmdl, res.best.model.num_changepoints()});

    const std::vector<int> taus = changepoint_times(res.best.model.eta);
    bool hit = !taus.empty();
    if (hit && config.recency_window > 0)
      hit = taus.back() > h - config.recency_window;
    if (hit) {
      out.detected = true;
      out.detection_time = h;
      out.detected_changepoints = taus;
      if (reference_time && *reference_time <= h)
        out.run_length = h - *reference_time;
      break;
    }
  }
  return out;
}

}  // namespace bmdl
