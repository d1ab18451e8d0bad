#include <doctest.h>

#include "bmdl/errors.hpp"
#include "bmdl/model.hpp"
#include "bmdl/rng.hpp"

using namespace bmdl;

namespace {

ChangepointModel with_cps(int n, std::initializer_list<int> taus, int k = 0,
                          int p = 0) {
  ChangepointModel m = ChangepointModel::null_model(n);
  for (int tau : taus) m.eta[tau - 1] = 1;
  m.k = k;
  m.p = p;
  return m;
}

}  // namespace

TEST_CASE("defaults derive k_max from the period") {
  CHECK(Hyperparams::defaults_for(12).k_max == 5);
  CHECK(Hyperparams::defaults_for(6).k_max == 2);
  CHECK(Hyperparams::defaults_for(1).k_max == 0);
  CHECK(Hyperparams::defaults_for(12).p_max == 5);
  CHECK(Hyperparams::defaults_for(12).min_regime_length == 2);
}

TEST_CASE("nu resolves to the series length only when unset") {
  Hyperparams h;
  CHECK(resolve_nu(h, 150) == 150.0);
  h.nu = 42.0;
  CHECK(resolve_nu(h, 150) == 42.0);
}

TEST_CASE("null model is always valid") {
  const Hyperparams hyper = Hyperparams::defaults_for(12);
  const auto m = ChangepointModel::null_model(100);
  CHECK(static_cast<bool>(validate_model(m, hyper, 100)));
  CHECK(m.num_changepoints() == 0);
}

TEST_CASE("changepoints in the first p_max times are rejected") {
  const Hyperparams hyper = Hyperparams::defaults_for(12);  // p_max = 5
  const auto m = with_cps(100, {2});
  const Validity v = validate_model(m, hyper, 100);
  CHECK(!v);
  CHECK(v.defect == ModelDefect::early_changepoint);
  CHECK(v.reason() == "changepoint within first p_max times");
}

TEST_CASE("harmonic order is capped at floor((T-1)/2)") {
  const Hyperparams hyper = Hyperparams::defaults_for(12);  // k_max = 5
  auto m = ChangepointModel::null_model(100);
  m.k = 6;
  const Validity v = validate_model(m, hyper, 100);
  CHECK(!v);
  CHECK(v.defect == ModelDefect::k_out_of_range);
  m.k = 5;
  CHECK(static_cast<bool>(validate_model(m, hyper, 100)));
}

TEST_CASE("AR order is capped at p_max") {
  const Hyperparams hyper = Hyperparams::defaults_for(12);
  auto m = ChangepointModel::null_model(100);
  m.p = 6;
  CHECK(validate_model(m, hyper, 100).defect == ModelDefect::p_out_of_range);
  m.p = 5;
  CHECK(static_cast<bool>(validate_model(m, hyper, 100)));
}

TEST_CASE("regimes shorter than the minimum are rejected") {
  const Hyperparams hyper = Hyperparams::defaults_for(12);
  // Fit window starts at 6; a changepoint at 7 leaves regime 1 a single row.
  CHECK(validate_model(with_cps(20, {7}), hyper, 20).defect ==
        ModelDefect::regime_too_short);
  CHECK(static_cast<bool>(validate_model(with_cps(20, {8}), hyper, 20)));
  // Final regime must also hold min_regime_length points.
  CHECK(validate_model(with_cps(20, {20}), hyper, 20).defect ==
        ModelDefect::regime_too_short);
  CHECK(static_cast<bool>(validate_model(with_cps(20, {19}), hyper, 20)));
  // Adjacent changepoints pinch the middle regime.
  CHECK(validate_model(with_cps(30, {10, 11}), hyper, 30).defect ==
        ModelDefect::regime_too_short);
  CHECK(static_cast<bool>(validate_model(with_cps(30, {10, 12}), hyper, 30)));
}

TEST_CASE("regime index follows the partition rule") {
  SUBCASE("no changepoints puts everything in regime 1") {
    const auto m = ChangepointModel::null_model(10);
    for (int t = 1; t <= 10; ++t) CHECK(regime_index(m.eta, t) == 1);
  }
  SUBCASE("boundary: tau starts its own regime") {
    const auto m = with_cps(10, {6});
    CHECK(regime_index(m.eta, 5) == 1);
    CHECK(regime_index(m.eta, 6) == 2);
    CHECK(regime_index(m.eta, 10) == 2);
  }
  SUBCASE("two changepoints") {
    const auto m = with_cps(10, {4, 8});
    CHECK(regime_index(m.eta, 9) == 3);
    CHECK(regime_index(m.eta, 1) == 1);
    CHECK(regime_index(m.eta, 4) == 2);
    CHECK(regime_index(m.eta, 7) == 2);
    CHECK(regime_index(m.eta, 8) == 3);
  }
}

TEST_CASE("exactly one regime per time, non-decreasing, +1 at changepoints") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 50;
    ChangepointModel m = ChangepointModel::null_model(n);
    for (int t = 8; t <= n - 2; ++t)
      if (rng.uniform01() < 0.1) m.eta[t - 1] = 1;
    int prev = regime_index(m.eta, 1);
    CHECK(prev == 1);
    for (int t = 2; t <= n; ++t) {
      const int r = regime_index(m.eta, t);
      CHECK(r - prev == (m.eta[t - 1] ? 1 : 0));
      prev = r;
    }
    CHECK(prev == m.num_changepoints() + 1);
  }
}

TEST_CASE("changepoint times are sorted and match eta") {
  const auto m = with_cps(30, {12, 9, 25});
  CHECK(changepoint_times(m.eta) == std::vector<int>{9, 12, 25});
  CHECK(m.num_changepoints() == 3);
}

TEST_CASE("series validation rejects unusable inputs") {
  const Hyperparams hyper = Hyperparams::defaults_for(12);
  TimeSeries short_series{std::vector<double>(8, 1.0), 12, std::nullopt};
  CHECK_THROWS_AS(validate_series(short_series, hyper), ValidationError);

  TimeSeries nan_series{std::vector<double>(50, 1.0), 12, std::nullopt};
  nan_series.values[10] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate_series(nan_series, hyper), ValidationError);

  TimeSeries bad_period{std::vector<double>(50, 1.0), 0, std::nullopt};
  CHECK_THROWS_AS(validate_series(bad_period, hyper), ValidationError);

  TimeSeries ok{std::vector<double>(50, 1.0), 12, std::nullopt};
  CHECK_NOTHROW(validate_series(ok, hyper));
}

TEST_CASE("calendar labels step monthly from the start") {
  TimeSeries ts{std::vector<double>(40, 0.0), 12, YearMonth{2011, 1}};
  CHECK(ts.label(1) == "2011-01");
  CHECK(ts.label(12) == "2011-12");
  CHECK(ts.label(13) == "2012-01");
  CHECK(ts.label(29) == "2013-05");
  TimeSeries undated{std::vector<double>(40, 0.0), 12, std::nullopt};
  CHECK(undated.label(29) == "29");
}
