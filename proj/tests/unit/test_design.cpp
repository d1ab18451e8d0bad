#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bmdl/design.hpp"
#include "bmdl/rng.hpp"

using namespace bmdl;

namespace {

ChangepointModel with_cps(int n, std::initializer_list<int> taus, int k = 0) {
  ChangepointModel m = ChangepointModel::null_model(n);
  for (int tau : taus) m.eta[tau - 1] = 1;
  m.k = k;
  return m;
}

}  // namespace

TEST_CASE("baseline-only design: Z rows are (1, t), D empty") {
  const auto m = ChangepointModel::null_model(100);
  const DesignMatrices d = build_design(m, 100, 12, 5);
  CHECK(d.first_row_time == 6);
  CHECK(d.Z.rows() == 95);
  CHECK(d.D.cols() == 0);
  for (int i = 0; i < d.Z.rows(); ++i) {
    CHECK(d.Z(i, 0) == 1.0);
    CHECK(d.Z(i, 1) == 6.0 + i);
  }
}

TEST_CASE("regime indicator pair activates exactly at tau") {
  const auto m = with_cps(100, {60});
  const DesignMatrices d = build_design(m, 100, 12, 5);
  REQUIRE(d.D.cols() == 2);
  const int row59 = 59 - d.first_row_time;
  const int row60 = 60 - d.first_row_time;
  CHECK(d.D(row59, 0) == 0.0);
  CHECK(d.D(row59, 1) == 0.0);
  CHECK(d.D(row60, 0) == 1.0);
  CHECK(d.D(row60, 1) == 60.0);
  CHECK(d.D(d.D.rows() - 1, 0) == 1.0);
  CHECK(d.D(d.D.rows() - 1, 1) == 100.0);
}

TEST_CASE("harmonic columns at t=3, T=12 are (sin, cos) = (1, 0)") {
  ChangepointModel m = ChangepointModel::null_model(12);
  m.k = 1;
  const DesignMatrices d = build_design(m, 12, 12, 2);
  const int row3 = 3 - d.first_row_time;
  CHECK(d.D(row3, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.D(row3, 1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("D has 2m+2k columns; dropping a changepoint removes two") {
  const auto m = with_cps(100, {20, 60, 80}, 2);
  const DesignMatrices d = build_design(m, 100, 12, 5);
  CHECK(d.D.cols() == 2 * 3 + 2 * 2);
  auto fewer = m;
  fewer.eta[59] = 0;
  CHECK(build_design(fewer, 100, 12, 5).D.cols() == d.D.cols() - 2);
}

TEST_CASE("harmonic columns repeat with period T") {
  const auto m = with_cps(100, {}, 3);
  const DesignMatrices d = build_design(m, 100, 12, 5);
  for (int i = 0; i + 12 < d.D.rows(); ++i)
    for (int c = 0; c < 6; ++c)
      CHECK(d.D(i, c) == doctest::Approx(d.D(i + 12, c)).epsilon(1e-12));
}

TEST_CASE("regime columns are block indicators: active only inside regime r") {
  const auto m = with_cps(50, {20, 35});
  const DesignMatrices d = build_design(m, 50, 12, 5);
  REQUIRE(d.D.cols() == 4);
  for (int i = 0; i < d.D.rows(); ++i) {
    const int t = d.first_row_time + i;
    const int r = regime_index(m.eta, t);
    CHECK(d.D(i, 0) == (r == 2 ? 1.0 : 0.0));
    CHECK(d.D(i, 1) == (r == 2 ? static_cast<double>(t) : 0.0));
    CHECK(d.D(i, 2) == (r == 3 ? 1.0 : 0.0));
    CHECK(d.D(i, 3) == (r == 3 ? static_cast<double>(t) : 0.0));
  }
}

TEST_CASE("fitted mean decomposes as baseline + increment + harmonics") {
  Rng rng(5);
  const int n = 60, T = 12, p_max = 5;
  const auto model = with_cps(n, {25, 40}, 2);
  const DesignMatrices d = build_design(model, n, T, p_max);

  Eigen::Vector2d s(1.3, -0.2);
  Eigen::VectorXd mu(d.D.cols());
  for (int i = 0; i < mu.size(); ++i) mu(i) = rng.normal();

  for (int i = 0; i < d.Z.rows(); ++i) {
    const int t = d.first_row_time + i;
    const int r = regime_index(model.eta, t);
    double expect = s(0) + s(1) * t;
    if (r > 1) expect += mu(2 * (r - 2)) + mu(2 * (r - 2) + 1) * t;
    for (int h = 1; h <= model.k; ++h) {
      const double w = 2.0 * std::numbers::pi * t * h / T;
      expect += mu(4 + 2 * (h - 1)) * std::sin(w) +
                mu(4 + 2 * (h - 1) + 1) * std::cos(w);
    }
    const double got = d.Z.row(i).dot(s) + d.D.row(i).dot(mu);
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("extended rows prepend lag context and agree on the fit window") {
  const auto m = with_cps(50, {30}, 1);
  const DesignMatrices fit = build_design(m, 50, 12, 5);
  const DesignMatrices ext = build_design_rows(m, 50, 12, 3);
  CHECK(ext.Z.rows() == fit.Z.rows() + 3);
  CHECK(ext.first_row_time == 3);
  CHECK((ext.Z.bottomRows(fit.Z.rows()) - fit.Z).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ext.D.bottomRows(fit.D.rows()) - fit.D).cwiseAbs().maxCoeff() == 0.0);
  // Lag rows precede every changepoint, so their regime columns are zero.
  for (int i = 0; i < 3; ++i) {
    CHECK(ext.D(i, 0) == 0.0);
    CHECK(ext.D(i, 1) == 0.0);
  }
}
