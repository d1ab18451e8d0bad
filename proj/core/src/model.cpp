#include "bmdl/model.hpp"

#include <algorithm>
#include <cmath>

#include "bmdl/errors.hpp"

namespace bmdl {

int ChangepointModel::num_changepoints() const {
  int m = 0;
  for (auto e : eta) m += e != 0;
  return m;
}

std::vector<int> changepoint_times(const std::vector<std::uint8_t>& eta) {
  std::vector<int> taus;
  for (int t = 1; t <= static_cast<int>(eta.size()); ++t)
    if (eta[static_cast<std::size_t>(t) - 1]) taus.push_back(t);
  return taus;
}

int regime_index(const std::vector<std::uint8_t>& eta, int t) {
  // tau_0 = 1, so t belongs to regime 1 until the first changepoint at or
  // before it; each changepoint <= t advances the regime by one.
  int r = 1;
  for (int u = 2; u <= t; ++u) r += eta[static_cast<std::size_t>(u) - 1] != 0;
  return r;
}

std::string Validity::reason() const {
  switch (defect) {
    case ModelDefect::none:
      return "valid";
    case ModelDefect::early_changepoint:
      return "changepoint within first p_max times";
    case ModelDefect::k_out_of_range:
      return "harmonic order out of range";
    case ModelDefect::p_out_of_range:
      return "AR order out of range";
    case ModelDefect::regime_too_short:
      return "regime shorter than the minimum length";
  }
  return "valid";
}

Validity validate_model(const ChangepointModel& model, const Hyperparams& hyper,
                        int n) {
  for (int t = 1; t <= std::min(hyper.p_max, n); ++t)
    if (model.eta[static_cast<std::size_t>(t) - 1])
      return {ModelDefect::early_changepoint};
  if (model.k < 0 || model.k > hyper.k_max) return {ModelDefect::k_out_of_range};
  if (model.p < 0 || model.p > hyper.p_max) return {ModelDefect::p_out_of_range};

  // Regime lengths are counted inside the fit window p_max+1..n: the window
  // rows are the only ones a regime's coefficients see.
  int prev = hyper.p_max + 1;
  for (int t = hyper.p_max + 1; t <= n; ++t) {
    if (!model.eta[static_cast<std::size_t>(t) - 1]) continue;
    if (t - prev < hyper.min_regime_length)
      return {ModelDefect::regime_too_short};
    prev = t;
  }
  if (n + 1 - prev < hyper.min_regime_length)
    return {ModelDefect::regime_too_short};
  return {};
}

void validate_series(const TimeSeries& ts, const Hyperparams& hyper) {
  if (ts.period < 1) throw ValidationError("period must be >= 1");
  const int n = ts.n();
  const int need = hyper.p_max + 2 * hyper.min_regime_length;
  if (n < need)
    throw ValidationError("series has " + std::to_string(n) +
                          " observations; need at least " +
                          std::to_string(need));
  for (int t = 1; t <= n; ++t)
    if (!std::isfinite(ts.at(t)))
      throw ValidationError("non-finite value at t=" + std::to_string(t));
}

}  // namespace bmdl
