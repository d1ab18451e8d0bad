#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "bmdl/errors.hpp"
#include "bmdl/rng.hpp"
#include "bmdl/scoring.hpp"
#include "bmdl/search.hpp"

using namespace bmdl;

namespace {

TimeSeries noise_series(int n, std::uint64_t seed, int period = 12) {
  Rng rng(seed);
  std::vector<double> vals(n);
  for (double& v : vals) v = rng.normal();
  return TimeSeries{std::move(vals), period, std::nullopt};
}

TimeSeries step_series(int n, int cp, double jump, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> vals(n);
  for (int t = 1; t <= n; ++t)
    vals[t - 1] = 0.5 + 0.01 * t + (t >= cp ? jump : 0.0) + rng.normal();
  return TimeSeries{std::move(vals), 12, std::nullopt};
}

}  // namespace

TEST_CASE("acceptance probability follows the score gap") {
  CHECK(mh::acceptance_probability(5.0, 5.0) == 1.0);
  CHECK(mh::acceptance_probability(5.0, 4.0) == 1.0);
  CHECK(mh::acceptance_probability(5.0, 5.0 + std::log(4.0)) ==
        doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("proposals stay inside the admissible space") {
  const Hyperparams hyper = Hyperparams::defaults_for(12);
  const int n = 40;
  SearchConfig config;
  ChangepointModel current = ChangepointModel::null_model(n);
  current.k = 2;
  current.p = 1;

  Rng rng(123);
  int flips = 0, k_moves = 0, p_moves = 0;
  for (int i = 0; i < 20000; ++i) {
    const mh::Proposal prop = mh::draw_proposal(rng, current, hyper, config, n);
    switch (prop.kind) {
      case mh::ProposalKind::flip_eta:
        ++flips;
        CHECK(prop.value >= hyper.p_max + 1);
        CHECK(prop.value <= n);
        break;
      case mh::ProposalKind::move_k:
        ++k_moves;
        CHECK(prop.value >= 0);
        CHECK(prop.value <= hyper.k_max);
        CHECK(prop.value != current.k);
        break;
      case mh::ProposalKind::move_p:
        ++p_moves;
        CHECK(prop.value >= 0);
        CHECK(prop.value <= hyper.p_max);
        CHECK(prop.value != current.p);
        break;
    }
  }
  // 0.8 / 0.1 / 0.1 mix, with generous slack.
  CHECK(flips > 15000);
  CHECK(k_moves > 1200);
  CHECK(p_moves > 1200);
}

TEST_CASE("pure noise keeps the null model in most chains") {
  const Hyperparams hyper = Hyperparams::defaults_for(12);
  SearchConfig config;
  config.iterations = 20000;
  int nulls = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const TimeSeries ts = noise_series(150, seed);
    config.seed = seed;
    const SearchResult res = mh_search(ts, hyper, config);
    if (res.best.model.num_changepoints() == 0) ++nulls;
  }
  CHECK(nulls >= 16);
}

TEST_CASE("a large step is located within a couple of observations") {
  const Hyperparams hyper = Hyperparams::defaults_for(12);
  SearchConfig config;
  config.iterations = 20000;
  int located = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const TimeSeries ts = step_series(200, 60, 8.0, seed);
    config.seed = seed;
    const SearchResult res = mh_search(ts, hyper, config);
    const auto taus = changepoint_times(res.best.model.eta);
    if (taus.size() == 1 && taus[0] >= 58 && taus[0] <= 62) ++located;
  }
  CHECK(located >= 19);
}

TEST_CASE("exhaustive search equals a hand-rolled scan of single changepoints") {
  const TimeSeries ts = step_series(20, 12, 6.0, 7);
  Hyperparams hyper = Hyperparams::defaults_for(12);
  hyper.p_max = 2;
  hyper.k_max = 0;

  SearchBounds bounds;
  bounds.max_changepoints = 1;
  const ScoredModel best = exhaustive_search(ts, hyper, bounds);

  double manual_best = bmdl_score(ts, ChangepointModel::null_model(20), hyper);
  for (int cp = 1; cp <= 20; ++cp) {
    ChangepointModel m = ChangepointModel::null_model(20);
    m.eta[cp - 1] = 1;
    if (!validate_model(m, hyper, 20)) continue;
    manual_best = std::min(manual_best, bmdl_score(ts, m, hyper));
  }
  CHECK(best.bmdl == doctest::Approx(manual_best).epsilon(1e-14));
}

TEST_CASE("exhaustive search pins a strong step to its onset") {
  const TimeSeries ts = step_series(60, 30, 7.0, 19);
  Hyperparams hyper = Hyperparams::defaults_for(12);
  hyper.k_max = 0;
  SearchBounds bounds;
  bounds.max_changepoints = 1;
  bounds.p_max = 1;
  const ScoredModel best = exhaustive_search(ts, hyper, bounds);
  const auto taus = changepoint_times(best.model.eta);
  REQUIRE(taus.size() == 1);
  CHECK(taus[0] >= 29);
  CHECK(taus[0] <= 31);
}

TEST_CASE("the chain reaches the exhaustive optimum on a small problem") {
  Hyperparams hyper;
  hyper.p_max = 2;
  hyper.k_max = 1;
  SearchBounds bounds;
  bounds.max_changepoints = 2;
  bounds.k_max = 1;
  bounds.p_max = 1;

  int exact = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const TimeSeries ts = step_series(30, 15, 5.0, 100 + seed);
    const ScoredModel truth = exhaustive_search(ts, hyper, bounds);

    SearchConfig config;
    config.iterations = 50000;
    config.seed = seed;
    config.max_changepoints = 2;
    config.max_k = 1;
    config.max_p = 1;
    const SearchResult res = mh_search(ts, hyper, config);

    CHECK(res.best.bmdl >= truth.bmdl - 1e-12);
    if (std::abs(res.best.bmdl - truth.bmdl) <= 1e-9) ++exact;
  }
  CHECK(exact >= 2);
}

TEST_CASE("identical seeds give bit-identical search results") {
  const TimeSeries ts = step_series(120, 50, 3.0, 4);
  const Hyperparams hyper = Hyperparams::defaults_for(12);
  SearchConfig config;
  config.iterations = 5000;
  config.seed = 77;
  config.record_trace = true;

  const SearchResult a = mh_search(ts, hyper, config);
  const SearchResult b = mh_search(ts, hyper, config);

  CHECK(a.best.model == b.best.model);
  CHECK(std::memcmp(&a.best.bmdl, &b.best.bmdl, sizeof(double)) == 0);
  CHECK(a.acceptance_rate == b.acceptance_rate);
  CHECK(a.visited_count == b.visited_count);
  CHECK(a.scoring_failures == b.scoring_failures);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].bmdl == b.trace[i].bmdl);
    CHECK(a.trace[i].m == b.trace[i].m);
  }
  CHECK(a.eta_marginals == b.eta_marginals);
}

TEST_CASE("the reported best is never worse than any visited state") {
  const TimeSeries ts = step_series(100, 40, 2.0, 9);
  const Hyperparams hyper = Hyperparams::defaults_for(12);
  SearchConfig config;
  config.iterations = 3000;
  config.seed = 12;
  config.record_trace = true;
  const SearchResult res = mh_search(ts, hyper, config);

  REQUIRE(res.trace.size() == 3000);
  for (const TracePoint& pt : res.trace) CHECK(res.best.bmdl <= pt.bmdl);
  CHECK(res.acceptance_rate > 0.01);
  CHECK(res.acceptance_rate < 0.9);
  CHECK(res.scoring_failures == 0);
  CHECK(res.visited_count >= 1);
  CHECK(res.visited_count <= config.iterations + 1);
}

TEST_CASE("eta occupancy is a proper frequency and respects the floor") {
  const TimeSeries ts = step_series(100, 40, 6.0, 2);
  const Hyperparams hyper = Hyperparams::defaults_for(12);
  SearchConfig config;
  config.iterations = 4000;
  config.seed = 3;
  const SearchResult res = mh_search(ts, hyper, config);

  REQUIRE(res.eta_marginals.size() == 100);
  for (int t = 1; t <= 100; ++t) {
    const double f = res.eta_marginals[static_cast<std::size_t>(t) - 1];
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    if (t <= hyper.p_max) CHECK(f == 0.0);
  }
  // The true changepoint should dominate the occupancy mass.
  const double at_cp = res.eta_marginals[39];
  CHECK(at_cp > 0.5);
}

TEST_CASE("warm starts and iteration counts are validated") {
  const TimeSeries ts = noise_series(80, 1);
  const Hyperparams hyper = Hyperparams::defaults_for(12);
  SearchConfig config;
  config.iterations = 0;
  CHECK_THROWS_AS(mh_search(ts, hyper, config), ValidationError);

  config.iterations = 200;
  ChangepointModel start = ChangepointModel::null_model(80);
  start.eta[39] = 1;
  config.start = start;
  const SearchResult res = mh_search(ts, hyper, config);
  CHECK(std::isfinite(res.best.bmdl));

  // Mismatched warm-start length falls back to the null model silently.
  config.start = ChangepointModel::null_model(50);
  const SearchResult fallback = mh_search(ts, hyper, config);
  CHECK(std::isfinite(fallback.best.bmdl));
}

TEST_CASE("the enumeration cap rejects oversized exhaustive requests") {
  const TimeSeries ts = noise_series(200, 6);
  const Hyperparams hyper = Hyperparams::defaults_for(12);
  SearchBounds bounds;
  bounds.max_changepoints = 4;
  bounds.k_max = 5;
  bounds.p_max = 5;
  CHECK_THROWS_AS(exhaustive_search(ts, hyper, bounds), ValidationError);

  SearchBounds empty;
  empty.k_min = 3;
  empty.k_max = 2;
  CHECK_THROWS_AS(exhaustive_search(ts, hyper, empty), ValidationError);
}
