#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace bmdl {

// Autoregressive error fit. phi is empty when p = 0; the reflection-
// coefficient parameterization keeps every fit causal/stationary.
struct ArFit {
  std::vector<double> phi;
  double innovation_variance = 0.0;

  int order() const { return static_cast<int>(phi.size()); }
};

// Burg's method on a (residual) sequence. Throws ValidationError when the
// sequence has <= p entries, ScoringError when its energy is zero.
ArFit estimate_ar(std::span<const double> x, int p);

// out[t] = x[t] - sum_j phi[j] * x[t-j], defined for t = p+1..len(x); the
// output drops the first p entries. Empty phi returns x unchanged.
std::vector<double> whiten(std::span<const double> x,
                           std::span<const double> phi);

// whiten() applied to every column; output has p fewer rows.
Eigen::MatrixXd whiten_columns(const Eigen::MatrixXd& x,
                               std::span<const double> phi);

}  // namespace bmdl
