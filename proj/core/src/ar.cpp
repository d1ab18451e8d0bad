#include "bmdl/ar.hpp"

#include <cmath>

#include "bmdl/errors.hpp"

namespace bmdl {

ArFit estimate_ar(std::span<const double> x, int p) {
  const int n = static_cast<int>(x.size());
  if (p < 0) throw ValidationError("AR order must be >= 0");
  if (n <= p) throw ValidationError("AR fit needs more than p observations");

  double energy = 0.0;
  for (double v : x) energy += v * v;
  if (p == 0) return {{}, energy / n};
  if (energy <= 0.0) throw ScoringError("zero-variance sequence in AR fit");

  // Burg recursion: forward/backward prediction errors f, b; phi updated by
  // the Levinson step with reflection coefficient kappa. |kappa| < 1 keeps
  // the fitted polynomial stationary.
  std::vector<double> f(x.begin(), x.end());
  std::vector<double> b(x.begin(), x.end());
  std::vector<double> phi(p, 0.0);
  std::vector<double> prev(p, 0.0);
  double err = energy / n;

  for (int k = 0; k < p; ++k) {
    double num = 0.0, den = 0.0;
    for (int t = k + 1; t < n; ++t) {
      num += f[t] * b[t - 1];
      den += f[t] * f[t] + b[t - 1] * b[t - 1];
    }
    if (den <= 0.0) throw ScoringError("zero-variance sequence in AR fit");
    double kappa = 2.0 * num / den;
    // den >= 2|num| always; the clamp only bites on perfectly predictable
    // data, where it keeps the whitening filter off the unit circle.
    const double limit = 1.0 - 1e-10;
    if (kappa > limit) kappa = limit;
    if (kappa < -limit) kappa = -limit;

    prev = phi;
    for (int j = 0; j < k; ++j) phi[j] = prev[j] - kappa * prev[k - 1 - j];
    phi[k] = kappa;

    for (int t = n - 1; t >= k + 1; --t) {
      const double ft = f[t];
      const double bt = b[t - 1];
      f[t] = ft - kappa * bt;
      b[t] = bt - kappa * ft;
    }
    err *= 1.0 - kappa * kappa;
  }
  return {std::move(phi), err};
}

std::vector<double> whiten(std::span<const double> x,
                           std::span<const double> phi) {
  const int p = static_cast<int>(phi.size());
  const int n = static_cast<int>(x.size());
  std::vector<double> out;
  out.reserve(n - p);
  for (int t = p; t < n; ++t) {
    double v = x[t];
    for (int j = 1; j <= p; ++j) v -= phi[j - 1] * x[t - j];
    out.push_back(v);
  }
  return out;
}

Eigen::MatrixXd whiten_columns(const Eigen::MatrixXd& x,
                               std::span<const double> phi) {
  const int p = static_cast<int>(phi.size());
  const auto rows = x.rows() - p;
  Eigen::MatrixXd out = x.bottomRows(rows);
  for (int j = 1; j <= p; ++j) out -= phi[j - 1] * x.middleRows(p - j, rows);
  return out;
}

}  // namespace bmdl
