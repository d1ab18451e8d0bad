#include "bmdl/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "bmdl/errors.hpp"

namespace bmdl {

namespace mh {

double acceptance_probability(double current_bmdl, double proposed_bmdl) {
  if (proposed_bmdl <= current_bmdl) return 1.0;
  return std::exp(current_bmdl - proposed_bmdl);
}

Proposal draw_proposal(Rng& rng, const ChangepointModel& current,
                       const Hyperparams& hyper, const SearchConfig& config,
                       int n) {
  const ProposalWeights& w = config.weights;
  const double u = rng.uniform01();
  if (u < w.flip_eta) {
    const int t = static_cast<int>(rng.uniform_int(hyper.p_max + 1, n));
    return {ProposalKind::flip_eta, t};
  }
  if (u < w.flip_eta + w.move_k) {
    const int hi = std::min(hyper.k_max, config.max_k.value_or(hyper.k_max));
    if (hi <= 0) return {ProposalKind::move_k, current.k};  // no alternative
    int v = static_cast<int>(rng.uniform_int(0, hi - 1));
    if (v >= current.k) ++v;  // uniform over {0..hi} minus the current order
    return {ProposalKind::move_k, v};
  }
  const int hi = std::min(hyper.p_max, config.max_p.value_or(hyper.p_max));
  if (hi <= 0) return {ProposalKind::move_p, current.p};
  int v = static_cast<int>(rng.uniform_int(0, hi - 1));
  if (v >= current.p) ++v;
  return {ProposalKind::move_p, v};
}

}  // namespace mh

namespace {

struct ModelKey {
  std::vector<std::uint64_t> bits;
  int k = 0, p = 0;
  bool operator==(const ModelKey&) const = default;
};

ModelKey make_key(const ChangepointModel& m) {
  ModelKey key;
  key.bits.assign((m.eta.size() + 63) / 64, 0);
  for (std::size_t t = 0; t < m.eta.size(); ++t)
    if (m.eta[t]) key.bits[t >> 6] |= 1ull << (t & 63);
  key.k = m.k;
  key.p = m.p;
  return key;
}

struct ModelKeyHash {
  std::size_t operator()(const ModelKey& key) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::uint64_t w : key.bits) h = splitmix64(h ^ w);
    h = splitmix64(h ^ static_cast<std::uint64_t>(key.k));
    h = splitmix64(h ^ static_cast<std::uint64_t>(key.p));
    return static_cast<std::size_t>(h);
  }
};

// (score, m, k, p) order matching better_than, usable before the winning
// model is rescored in full.
bool improves(double score, const ChangepointModel& cand, double best_score,
              const ChangepointModel& best) {
  if (score != best_score) return score < best_score;
  const int mc = cand.num_changepoints(), mb = best.num_changepoints();
  if (mc != mb) return mc < mb;
  if (cand.k != best.k) return cand.k < best.k;
  return cand.p < best.p;
}

void check_weights(const ProposalWeights& w) {
  if (w.flip_eta < 0 || w.move_k < 0 || w.move_p < 0 ||
      std::abs(w.flip_eta + w.move_k + w.move_p - 1.0) > 1e-9)
    throw ValidationError("proposal weights must be nonnegative and sum to 1");
}

}  // namespace

SearchResult mh_search(const TimeSeries& ts, const Hyperparams& hyper,
                       const SearchConfig& config) {
  validate_series(ts, hyper);
  check_weights(config.weights);
  if (config.iterations < 1) throw ValidationError("iterations must be >= 1");
  const int n = ts.n();

  ChangepointModel cur = ChangepointModel::null_model(n);
  if (config.start && config.start->n() == n &&
      validate_model(*config.start, hyper, n) &&
      config.start->num_changepoints() <=
          config.max_changepoints.value_or(n) &&
      config.start->k <= config.max_k.value_or(hyper.k_max) &&
      config.start->p <= config.max_p.value_or(hyper.p_max)) {
    cur = *config.start;
  }

  double cur_score;
  try {
    cur_score = bmdl_score(ts, cur, hyper);
  } catch (const ScoringError&) {
    if (cur == ChangepointModel::null_model(n)) throw;
    cur = ChangepointModel::null_model(n);  // unscorable warm start
    cur_score = bmdl_score(ts, cur, hyper);
  }

  std::unordered_map<ModelKey, double, ModelKeyHash> memo;
  memo.emplace(make_key(cur), cur_score);

  ChangepointModel best = cur;
  double best_score = cur_score;
  std::vector<int> cps = changepoint_times(cur.eta);

  Rng rng(config.seed);
  std::int64_t accepted = 0, failures = 0;
  std::vector<std::int64_t> occupancy(n, 0);

  SearchResult result;
  if (config.record_trace) result.trace.reserve(config.iterations);

  for (std::int64_t iter = 1; iter <= config.iterations; ++iter) {
    const mh::Proposal prop = mh::draw_proposal(rng, cur, hyper, config, n);

    bool admissible = true;
    ChangepointModel cand = cur;
    switch (prop.kind) {
      case mh::ProposalKind::flip_eta: {
        auto& bit = cand.eta[prop.value - 1];
        if (!bit && config.max_changepoints &&
            cand.num_changepoints() >= *config.max_changepoints)
          admissible = false;
        else
          bit ^= 1;
        break;
      }
      case mh::ProposalKind::move_k:
        admissible = prop.value != cur.k;
        cand.k = prop.value;
        break;
      case mh::ProposalKind::move_p:
        admissible = prop.value != cur.p;
        cand.p = prop.value;
        break;
    }
    if (admissible) admissible = static_cast<bool>(validate_model(cand, hyper, n));

    if (admissible) {
      double cand_score;
      const auto [it, fresh] = memo.try_emplace(
          make_key(cand), std::numeric_limits<double>::infinity());
      if (fresh) {
        try {
          it->second = bmdl_score(ts, cand, hyper);
        } catch (const ScoringError&) {
          // leave +inf: auto-reject now and on every revisit
        }
      }
      cand_score = it->second;

      if (std::isinf(cand_score)) {
        ++failures;
      } else if (rng.uniform01() <
                 mh::acceptance_probability(cur_score, cand_score)) {
        cur = std::move(cand);
        cur_score = cand_score;
        ++accepted;
        if (prop.kind == mh::ProposalKind::flip_eta) {
          const auto pos = std::lower_bound(cps.begin(), cps.end(), prop.value);
          if (pos != cps.end() && *pos == prop.value)
            cps.erase(pos);
          else
            cps.insert(pos, prop.value);
        }
        if (improves(cur_score, cur, best_score, best)) {
          best = cur;
          best_score = cur_score;
        }
      }
    }

    for (int tau : cps) ++occupancy[tau - 1];
    if (config.record_trace)
      result.trace.push_back({iter, cur_score, static_cast<int>(cps.size()),
                              cur.k, cur.p});
  }

  result.best = score_model(ts, best, hyper);
  result.visited_count = static_cast<std::int64_t>(memo.size());
  result.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(config.iterations);
  result.scoring_failures = failures;
  result.eta_marginals.resize(n);
  for (int t = 0; t < n; ++t)
    result.eta_marginals[t] = static_cast<double>(occupancy[t]) /
                              static_cast<double>(config.iterations);
  return result;
}

ScoredModel exhaustive_search(const TimeSeries& ts, const Hyperparams& hyper,
                              const SearchBounds& bounds) {
  validate_series(ts, hyper);
  const int n = ts.n();
  const int n_eff = n - hyper.p_max;
  const int k_lo = std::max(0, bounds.k_min);
  const int k_hi = std::min(bounds.k_max, hyper.k_max);
  const int p_lo = std::max(0, bounds.p_min);
  const int p_hi = std::min(bounds.p_max, hyper.p_max);
  if (k_hi < k_lo || p_hi < p_lo)
    throw ValidationError("empty order range for exhaustive search");

  double count = 0.0, choose = 1.0;
  for (int j = 0; j <= bounds.max_changepoints; ++j) {
    if (j > 0) choose *= static_cast<double>(n_eff - j + 1) / j;
    count += choose;
  }
  count *= (k_hi - k_lo + 1) * (p_hi - p_lo + 1);
  if (count > 1e6)
    throw ValidationError("bounded model count exceeds the enumeration cap");

  ScoredModel best;
  bool found = false;
  ChangepointModel cand = ChangepointModel::null_model(n);

  const auto score_orders = [&] {
    for (int k = k_lo; k <= k_hi; ++k) {
      for (int p = p_lo; p <= p_hi; ++p) {
        cand.k = k;
        cand.p = p;
        if (!validate_model(cand, hyper, n)) continue;
        try {
          ScoredModel scored = score_model(ts, cand, hyper);
          if (!found || better_than(scored, best)) {
            best = std::move(scored);
            found = true;
          }
        } catch (const ScoringError&) {
        }
      }
    }
  };

  // Changepoint sets in lexicographic order, honoring the minimum gap to the
  // fit-window start, between changepoints, and to the series end.
  const int first_ok = hyper.p_max + 1 + hyper.min_regime_length;
  const int last_ok = n + 1 - hyper.min_regime_length;
  const auto recurse = [&](auto&& self, int next_min, int remaining) -> void {
    score_orders();
    if (remaining == 0) return;
    for (int tau = next_min; tau <= last_ok; ++tau) {
      cand.eta[tau - 1] = 1;
      self(self, tau + hyper.min_regime_length, remaining - 1);
      cand.eta[tau - 1] = 0;
    }
  };
  recurse(recurse, first_ok, bounds.max_changepoints);

  if (!found) throw ScoringError("no model in bounds could be scored");
  return best;
}

}  // namespace bmdl
