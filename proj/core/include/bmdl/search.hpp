#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bmdl/rng.hpp"
#include "bmdl/scoring.hpp"

namespace bmdl {

struct ProposalWeights {
  double flip_eta = 0.8;
  double move_k = 0.1;
  double move_p = 0.1;
};

struct SearchConfig {
  std::int64_t iterations = 100000;
  std::uint64_t seed = 0;
  ProposalWeights weights;
  bool record_trace = false;

  // Optional restrictions of the searched space (oracle-scale runs and
  // stress tests); absent means the full ranges from Hyperparams.
  std::optional<int> max_changepoints;
  std::optional<int> max_k;
  std::optional<int> max_p;

  // Warm start; falls back to the null model when absent or invalid.
  std::optional<ChangepointModel> start;
};

struct TracePoint {
  std::int64_t iteration;
  double bmdl;
  int m, k, p;
};

struct SearchResult {
  ScoredModel best;
  std::int64_t visited_count = 0;  // distinct models scored
  double acceptance_rate = 0.0;
  std::vector<TracePoint> trace;     // per-iteration state when recorded
  std::vector<double> eta_marginals; // chain occupancy of eta_t, index t-1
  std::int64_t scoring_failures = 0; // proposals rejected by scoring errors
};

// Metropolis-Hastings over (eta, k, p) from the null model (or config.start).
// Proposals: flip one eta position in {p_max+1..n}, or redraw k or p
// uniformly from its range excluding the current value. Symmetric, so a
// proposal is accepted with probability min(1, exp(current - proposed));
// invalid or unscorable proposals are rejected outright. Identical seeds
// give bit-identical results.
SearchResult mh_search(const TimeSeries& ts, const Hyperparams& hyper,
                       const SearchConfig& config);

struct SearchBounds {
  int max_changepoints = 1;
  int k_min = 0, k_max = 0;
  int p_min = 0, p_max = 0;
};

// Scores every valid model within bounds; the bounded model count (before
// validity filtering) must not exceed 10^6. Returns the argmin under
// better_than.
ScoredModel exhaustive_search(const TimeSeries& ts, const Hyperparams& hyper,
                              const SearchBounds& bounds);

namespace mh {

enum class ProposalKind { flip_eta, move_k, move_p };

struct Proposal {
  ProposalKind kind;
  int value;  // time index for flips, new order for k/p moves
};

// Consumes exactly the draws mh_search would for one proposal.
Proposal draw_proposal(Rng& rng, const ChangepointModel& current,
                       const Hyperparams& hyper, const SearchConfig& config,
                       int n);

// min(1, exp(current - proposed)); smaller scores are better.
double acceptance_probability(double current_bmdl, double proposed_bmdl);

}  // namespace mh

}  // namespace bmdl
