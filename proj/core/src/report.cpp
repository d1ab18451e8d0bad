#include "bmdl/report.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace bmdl {

namespace {

double harmonic_sum(const FitResult& fit, int t, int T) {
  double s = 0.0;
  for (int i = 1; i <= fit.k; ++i) {
    const double w = 2.0 * std::numbers::pi * t * i / T;
    s += fit.theta[i - 1].first * std::sin(w) +
         fit.theta[i - 1].second * std::cos(w);
  }
  return s;
}

// Shortest decimal round-trip form, matching the JSON emitter.
std::string num(double v) { return nlohmann::json(v).dump(); }

}  // namespace

FitResult fit_report(const TimeSeries& ts, const ScoredModel& scored,
                     const Hyperparams& hyper) {
  const int n = ts.n();
  FitResult fit;
  fit.fit_start = hyper.p_max + 1;
  fit.changepoint_times = changepoint_times(scored.model.eta);
  for (int tau : fit.changepoint_times)
    fit.changepoint_labels.push_back(ts.label(tau));

  const int m = static_cast<int>(fit.changepoint_times.size());
  fit.k = scored.model.k;
  for (int i = 0; i < fit.k; ++i)
    fit.theta.emplace_back(scored.mu_hat(2 * m + 2 * i),
                           scored.mu_hat(2 * m + 2 * i + 1));
  fit.p = scored.model.p;
  fit.phi = scored.phi_hat;
  fit.sigma2_hat = scored.sigma2_hat;
  fit.bmdl = scored.bmdl;

  // Regime r's reported line folds the baseline with the regime increment.
  for (int r = 1; r <= m + 1; ++r) {
    Segment seg;
    seg.start = r == 1 ? fit.fit_start : fit.changepoint_times[r - 2];
    seg.end = r == m + 1 ? n : fit.changepoint_times[r - 1] - 1;
    seg.intercept = scored.s_hat(0);
    seg.slope = scored.s_hat(1);
    if (r > 1) {
      seg.intercept += scored.mu_hat(2 * (r - 2));
      seg.slope += scored.mu_hat(2 * (r - 2) + 1);
    }
    fit.segments.push_back(seg);
  }

  for (int t = fit.fit_start; t <= n; ++t) {
    const Segment& seg = fit.segments[regime_index(scored.model.eta, t) - 1];
    const double line = seg.intercept + seg.slope * t;
    fit.linear_fit.push_back(line);
    fit.linear_seasonal_fit.push_back(line + harmonic_sum(fit, t, ts.period));
  }
  return fit;
}

FitResult fit_report(const TimeSeries& ts, const ChangepointModel& model,
                     const Hyperparams& hyper) {
  return fit_report(ts, score_model(ts, model, hyper), hyper);
}

std::string to_json(const FitResult& fit, const std::string& series_name) {
  nlohmann::json j;
  j["series"] = series_name;
  j["changepoints"] = nlohmann::json::array();
  for (std::size_t i = 0; i < fit.changepoint_times.size(); ++i)
    j["changepoints"].push_back({{"t", fit.changepoint_times[i]},
                                 {"label", fit.changepoint_labels[i]}});
  j["segments"] = nlohmann::json::array();
  for (const Segment& s : fit.segments)
    j["segments"].push_back({{"start", s.start},
                             {"end", s.end},
                             {"intercept", s.intercept},
                             {"slope", s.slope}});
  j["seasonal"]["k"] = fit.k;
  j["seasonal"]["theta"] = nlohmann::json::array();
  for (const auto& [sin_c, cos_c] : fit.theta)
    j["seasonal"]["theta"].push_back({{"sin", sin_c}, {"cos", cos_c}});
  j["ar"]["p"] = fit.p;
  j["ar"]["phi"] = fit.phi;
  j["sigma2"] = fit.sigma2_hat;
  j["bmdl"] = fit.bmdl;
  return j.dump(2) + "\n";
}

std::string plot_csv(const TimeSeries& ts, const FitResult& fit) {
  std::ostringstream out;
  out << "t,label,observed,linear_fit,linear_plus_seasonal_fit,regime\n";
  std::size_t next_cp = 0;
  int regime = 1;
  for (int t = 1; t <= ts.n(); ++t) {
    if (next_cp < fit.changepoint_times.size() &&
        fit.changepoint_times[next_cp] == t) {
      ++regime;
      ++next_cp;
    }
    out << t << ',' << ts.label(t) << ',' << num(ts.at(t)) << ',';
    if (t >= fit.fit_start)
      out << num(fit.linear_fit[t - fit.fit_start]) << ','
          << num(fit.linear_seasonal_fit[t - fit.fit_start]);
    else
      out << ',';
    out << ',' << regime << '\n';
  }
  return out.str();
}

}  // namespace bmdl
