#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmdl/time_series.hpp"

namespace bmdl {

// Candidate model: changepoint indicators plus harmonic and AR orders.
// eta[t-1] == 1 iff time t starts a new regime; changepoints never occur in
// the first p_max times.
struct ChangepointModel {
  std::vector<std::uint8_t> eta;
  int k = 0;  // harmonic order
  int p = 0;  // AR order

  int n() const { return static_cast<int>(eta.size()); }
  int num_changepoints() const;

  static ChangepointModel null_model(int n) {
    return {std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0), 0, 0};
  }
  bool operator==(const ChangepointModel&) const = default;
};

// Ordered changepoint times tau_1 < ... < tau_m recovered from eta.
std::vector<int> changepoint_times(const std::vector<std::uint8_t>& eta);

// Regime of time t: the r with tau_{r-1} <= t < tau_r, where tau_0 = 1 and
// tau_{m+1} = n+1. Requires 1 <= t <= n.
int regime_index(const std::vector<std::uint8_t>& eta, int t);

struct Hyperparams {
  double nu = 0.0;  // prior scale of the model-specific coefficients; <= 0
                    // means "resolve to the series length at scoring time"
  double a = 1.0;   // Beta prior on the changepoint probability
  double b = 19.0;
  int k_max = 5;
  int p_max = 5;
  int min_regime_length = 2;

  static Hyperparams defaults_for(int period) {
    Hyperparams h;
    h.k_max = (period - 1) / 2;
    return h;
  }
};

inline double resolve_nu(const Hyperparams& hyper, int n) {
  return hyper.nu > 0.0 ? hyper.nu : static_cast<double>(n);
}

enum class ModelDefect {
  none,
  early_changepoint,
  k_out_of_range,
  p_out_of_range,
  regime_too_short,
};

struct Validity {
  ModelDefect defect = ModelDefect::none;
  explicit operator bool() const { return defect == ModelDefect::none; }
  std::string reason() const;
};

// Accepts iff the model invariants hold and every regime, measured over the
// fit window t = p_max+1..n, has at least min_regime_length points.
Validity validate_model(const ChangepointModel& model, const Hyperparams& hyper,
                        int n);

// Throws ValidationError when the series cannot support any model under these
// hyperparameters (too short, non-finite values, bad period).
void validate_series(const TimeSeries& ts, const Hyperparams& hyper);

}  // namespace bmdl
