#include "bmdl/scoring.hpp"

#include <cmath>

#include "bmdl/ar.hpp"
#include "bmdl/design.hpp"
#include "bmdl/errors.hpp"

namespace bmdl {

namespace {

// Residual variance below this fraction of the response's mean square is an
// exact fit up to rounding, not a measurement; scoring it would yield an
// arbitrarily large negative fit term.
constexpr double kDegenerateRel = 1e-20;
constexpr double kConditionLimit = 1e12;

}  // namespace

RidgeProfile ridge_profile(const Eigen::VectorXd& y, const Eigen::MatrixXd& Z,
                           const Eigen::MatrixXd& D, double nu) {
  const auto rows = y.rows();
  const auto q = D.cols();
  RidgeProfile out;

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
  {
    const Eigen::Vector2d diag =
        qr.matrixQR().topLeftCorner<2, 2>().diagonal().cwiseAbs();
    if (!(diag.minCoeff() > 1e-13 * diag.maxCoeff()) || !(diag.maxCoeff() > 0.0))
      throw ScoringError("baseline design collapsed");
  }
  const Eigen::MatrixXd Q1 =
      qr.householderQ() * Eigen::MatrixXd::Identity(rows, 2);

  const Eigen::VectorXd y_perp = y - Q1 * (Q1.transpose() * y);

  Eigen::VectorXd resid;
  if (q > 0) {
    const Eigen::MatrixXd D_perp = D - Q1 * (Q1.transpose() * D);
    Eigen::MatrixXd gram = D_perp.transpose() * D_perp;
    gram.diagonal().array() += 1.0 / nu;

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    const Eigen::VectorXd d = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || !(d.minCoeff() > 0.0))
      throw ScoringError("ridge gram not positive definite");
    out.log_det_gram = d.array().log().sum();
    out.ill_conditioned = d.maxCoeff() > kConditionLimit * d.minCoeff();
    out.mu_hat = ldlt.solve(D_perp.transpose() * y_perp);
    resid = y_perp - D_perp * out.mu_hat;
  } else {
    out.mu_hat.resize(0);
    resid = y_perp;
  }

  // y_perp'(y_perp - D_perp mu) rather than |resid|^2: the score's variance
  // plug-in, positive because the ridge shrinks below the projection.
  out.sigma2_hat = y_perp.dot(resid) / static_cast<double>(rows);
  const double scale =
      std::max(1e-300, y.squaredNorm() / static_cast<double>(rows));
  if (!(out.sigma2_hat > kDegenerateRel * scale))
    throw ScoringError("residual variance vanished");

  out.s_hat = qr.solve(y - D * out.mu_hat);
  return out;
}

BmdlBreakdown assemble_breakdown(double sigma2_hat, double log_det_gram,
                                 int n_eff, int num_cols, int m, int p,
                                 double nu, double a, double b) {
  BmdlBreakdown out;
  out.fit = 0.5 * n_eff * std::log(sigma2_hat);
  if (num_cols > 0)
    out.mu_penalty = 0.5 * num_cols * std::log(nu) + 0.5 * log_det_gram;
  out.ar_penalty = 0.5 * p * std::log(static_cast<double>(n_eff));
  out.eta_penalty = -(std::lgamma(a + m) + std::lgamma(b + n_eff - m));
  return out;
}

ScoredModel profile_fit(const TimeSeries& ts, const ChangepointModel& model,
                        const Hyperparams& hyper) {
  const int n = ts.n();
  const int p_max = hyper.p_max;
  const int n_eff = n - p_max;
  const int m = model.num_changepoints();
  const int q = 2 * m + 2 * model.k;
  if (n_eff <= 2 + q || n_eff <= model.p)
    throw ScoringError("too few observations for the model's column count");

  ScoredModel out;
  out.model = model;

  if (model.p > 0) {
    const DesignMatrices base = build_design(model, n, ts.period, p_max);
    Eigen::VectorXd y0(n_eff);
    for (int i = 0; i < n_eff; ++i) y0(i) = ts.at(p_max + 1 + i);
    Eigen::MatrixXd zd(n_eff, 2 + q);
    zd << base.Z, base.D;
    const Eigen::VectorXd beta = zd.colPivHouseholderQr().solve(y0);
    const Eigen::VectorXd resid = y0 - zd * beta;
    out.phi_hat =
        estimate_ar({resid.data(), static_cast<std::size_t>(n_eff)}, model.p)
            .phi;
  }

  // Whitening consumes p leading rows, so the design and response extend back
  // to t = p_max+1-p; the whitened system again covers t = p_max+1..n.
  const int t0 = p_max + 1 - model.p;
  const DesignMatrices ext = build_design_rows(model, n, ts.period, t0);
  std::vector<double> x(static_cast<std::size_t>(n - t0 + 1));
  for (int i = 0; i < n - t0 + 1; ++i) x[i] = ts.at(t0 + i);
  const std::vector<double> xw = whiten(x, out.phi_hat);
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(xw.data(), n_eff);
  const Eigen::MatrixXd Zw = whiten_columns(ext.Z, out.phi_hat);
  const Eigen::MatrixXd Dw = whiten_columns(ext.D, out.phi_hat);

  RidgeProfile prof = ridge_profile(y, Zw, Dw, resolve_nu(hyper, n));
  out.sigma2_hat = prof.sigma2_hat;
  out.s_hat = prof.s_hat;
  out.mu_hat = std::move(prof.mu_hat);
  out.log_det_gram = prof.log_det_gram;
  out.ill_conditioned = prof.ill_conditioned;
  return out;
}

ScoredModel score_model(const TimeSeries& ts, const ChangepointModel& model,
                        const Hyperparams& hyper) {
  ScoredModel out = profile_fit(ts, model, hyper);
  const int n_eff = ts.n() - hyper.p_max;
  const int m = model.num_changepoints();
  out.breakdown = assemble_breakdown(
      out.sigma2_hat, out.log_det_gram, n_eff, 2 * m + 2 * model.k, m, model.p,
      resolve_nu(hyper, ts.n()), hyper.a, hyper.b);
  out.bmdl = out.breakdown.total();
  return out;
}

double bmdl_score(const TimeSeries& ts, const ChangepointModel& model,
                  const Hyperparams& hyper) {
  return score_model(ts, model, hyper).bmdl;
}

bool better_than(const ScoredModel& a, const ScoredModel& b) {
  if (a.bmdl != b.bmdl) return a.bmdl < b.bmdl;
  const int ma = a.model.num_changepoints(), mb = b.model.num_changepoints();
  if (ma != mb) return ma < mb;
  if (a.model.k != b.model.k) return a.model.k < b.model.k;
  return a.model.p < b.model.p;
}

}  // namespace bmdl
