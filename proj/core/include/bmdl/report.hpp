#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bmdl/scoring.hpp"

namespace bmdl {

// One regime's reported line over [start, end]: value(t) = intercept + slope*t.
struct Segment {
  int start = 0;
  int end = 0;
  double intercept = 0.0;
  double slope = 0.0;
};

// Human-facing view of a selected model. Segments tile fit_start..n; the
// regime-r line already folds the baseline and the regime increment together.
struct FitResult {
  std::vector<int> changepoint_times;
  std::vector<std::string> changepoint_labels;
  std::vector<Segment> segments;  // m + 1 entries
  int k = 0;
  std::vector<std::pair<double, double>> theta;  // (sin, cos) pair per harmonic
  int p = 0;
  std::vector<double> phi;
  double sigma2_hat = 0.0;
  double bmdl = 0.0;
  int fit_start = 1;  // p_max + 1; earlier times only provide lag context
  std::vector<double> linear_fit;           // segment lines, t = fit_start..n
  std::vector<double> linear_seasonal_fit;  // plus the harmonic sum
};

// Scores the model and assembles the report.
FitResult fit_report(const TimeSeries& ts, const ChangepointModel& model,
                     const Hyperparams& hyper);

// Assembles the report from an already scored model (no refit).
FitResult fit_report(const TimeSeries& ts, const ScoredModel& scored,
                     const Hyperparams& hyper);

// {series, changepoints, segments, seasonal, ar, sigma2, bmdl} at full
// precision.
std::string to_json(const FitResult& fit, const std::string& series_name);

// Columns t, label, observed, linear_fit, linear_plus_seasonal_fit, regime;
// fitted cells are blank for t < fit_start.
std::string plot_csv(const TimeSeries& ts, const FitResult& fit);

}  // namespace bmdl
