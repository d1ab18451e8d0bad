#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "bmdl/model.hpp"

namespace bmdl {

// Additive pieces of the description length; total() is the score.
struct BmdlBreakdown {
  double fit = 0.0;          // ((n-p_max)/2) * log(sigma2_hat)
  double mu_penalty = 0.0;   // (q/2) * log(nu) + (1/2) * log|D'D + I/nu|
  double ar_penalty = 0.0;   // (p/2) * log(n-p_max)
  double eta_penalty = 0.0;  // -log Gamma(a+m) - log Gamma(b+n-p_max-m)

  double total() const { return fit + mu_penalty + ar_penalty + eta_penalty; }
};

// Output of the projection-plus-ridge step on whitened data.
struct RidgeProfile {
  Eigen::VectorXd mu_hat;       // ridge coefficients for the D columns
  Eigen::Vector2d s_hat;        // baseline (intercept, slope)
  double sigma2_hat = 0.0;
  double log_det_gram = 0.0;    // log|D_perp' D_perp + I/nu|, 0 when D is empty
  bool ill_conditioned = false; // gram pivot spread beyond 1e12
};

// Projects Z out of y and D, ridge-fits the projected D, and recovers the
// baseline coefficients from the partial residual y - D*mu_hat. All inputs
// share one row range (already whitened). sigma2_hat divides by rows(y).
// Throws ScoringError on a collapsed Z or vanishing residual variance.
RidgeProfile ridge_profile(const Eigen::VectorXd& y, const Eigen::MatrixXd& Z,
                           const Eigen::MatrixXd& D, double nu);

struct ScoredModel {
  ChangepointModel model;
  double bmdl = std::numeric_limits<double>::quiet_NaN();
  BmdlBreakdown breakdown;
  double sigma2_hat = 0.0;
  Eigen::Vector2d s_hat = Eigen::Vector2d::Zero();
  Eigen::VectorXd mu_hat;
  std::vector<double> phi_hat;
  double log_det_gram = 0.0;
  bool ill_conditioned = false;
};

// Profile parameter estimates for one candidate model, in order: OLS on the
// raw design for AR residuals, Burg fit of phi, whitening of response and
// design, then ridge_profile. bmdl is left unset.
ScoredModel profile_fit(const TimeSeries& ts, const ChangepointModel& model,
                        const Hyperparams& hyper);

// profile_fit plus the description-length breakdown.
ScoredModel score_model(const TimeSeries& ts, const ChangepointModel& model,
                        const Hyperparams& hyper);

double bmdl_score(const TimeSeries& ts, const ChangepointModel& model,
                  const Hyperparams& hyper);

// Score terms from profiled quantities; exposed so oracle tests can rebuild
// the score from independently computed pieces. num_cols = 2m+2k.
BmdlBreakdown assemble_breakdown(double sigma2_hat, double log_det_gram,
                                 int n_eff, int num_cols, int m, int p,
                                 double nu, double a, double b);

// Strict order used everywhere a single best model is reported: smaller score
// wins; exact score ties break toward smaller m, then k, then p.
bool better_than(const ScoredModel& a, const ScoredModel& b);

}  // namespace bmdl
