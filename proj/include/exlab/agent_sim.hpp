#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "exlab/distribution.hpp"
#include "exlab/params.hpp"
#include "exlab/rng.hpp"

namespace exlab {

/// Wealth vector plus bank ledger. Invariants (checked every step):
/// sum of wealth = N*mu, bank_cash = bank_initial - total agent debt,
/// bank_cash >= 0.
struct SystemState {
  std::vector<int> wealth;
  long long bank_cash = 0;
  long long bank_initial = 0;
  long long debt_total = 0;  // sum of negative parts, tracked incrementally
  long long events_total = 0;    // accepted candidates: transfers + blocked
  long long events_blocked = 0;
  long long events_thinned = 0;  // candidates rejected by the thinning coin
  std::optional<long long> first_empty_event;  // events_total when bank_cash first hit 0
};

enum class StepOutcome { transfer, thinned, blocked };

struct SimResult {
  SystemState final_state;
  WealthDistribution histogram{0, 0};
  std::vector<std::pair<long long, WealthDistribution>> snapshots;
  std::uint64_t seed = 0;
  ModelParams params;
  /// Per-tick time average over all candidate steps (thinned ticks are
  /// genuine holding time under uniformization). Present when requested.
  std::optional<WealthDistribution> occupancy;
};

/// Fresh state with every agent at mu (uniform) or at the given values.
/// Explicit allocations must be nonnegative, length N, and sum to N*mu.
SystemState init_state(const ModelParams& params,
                       const std::optional<std::vector<int>>& allocation = std::nullopt);

/// Deterministic core of an accepted candidate: giver hands one dollar to
/// receiver if the giver holds a positive balance or the bank can lend;
/// otherwise the move is blocked. Counters and the bank ledger update
/// either way. pre: giver != receiver, both valid indices.
StepOutcome attempt_give(SystemState& state, int giver, int receiver);

/// One uniformization tick: draw a candidate giver uniformly, accept with
/// probability f(S_giver)/f_max, then draw a receiver uniformly among the
/// other N-1 agents and delegate to attempt_give. Consumes RNG draws in a
/// fixed order (giver, coin, receiver) for reproducibility.
StepOutcome step(SystemState& state, const RateFunction& f, double f_max, Rng& rng);

/// Runs until num_events accepted candidates (transfers + blocked) have
/// occurred. Deterministic given (params, num_events, seed). Snapshots are
/// taken every snapshot_every accepted events. Throws UnsupportedRateError
/// when the rate has no finite thinning bound (exponential).
SimResult run(const ModelParams& params, long long num_events, std::uint64_t seed,
              std::optional<long long> snapshot_every = std::nullopt,
              bool track_occupancy = false);

/// Fraction of agents at each value, on the smallest window covering the
/// occupied values and 0. Mass is exactly 1 as the rational counts/N.
WealthDistribution empirical_distribution(const SystemState& state);

}  // namespace exlab
