#include "exlab/agent_sim.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "exlab/errors.hpp"

namespace exlab {

namespace {

constexpr long long kFullRecheckEvery = 1ll << 20;  // candidate ticks between full ledger audits

void check_ledger(const SystemState& s) {
  if (s.bank_cash < 0 || s.bank_cash + s.debt_total != s.bank_initial)
    throw std::logic_error("bank ledger identity violated: cash " +
                           std::to_string(s.bank_cash) + " + debt " +
                           std::to_string(s.debt_total) + " != " +
                           std::to_string(s.bank_initial));
}

void full_recheck(const SystemState& s, long long expected_sum) {
  long long sum = 0, debt = 0;
  for (int v : s.wealth) {
    sum += v;
    if (v < 0) debt -= v;
  }
  if (sum != expected_sum)
    throw std::logic_error("agent money not conserved: " + std::to_string(sum) +
                           " != " + std::to_string(expected_sum));
  if (debt != s.debt_total)
    throw std::logic_error("tracked debt drifted from recomputed debt");
  check_ledger(s);
}

}  // namespace

SystemState init_state(const ModelParams& params,
                       const std::optional<std::vector<int>>& allocation) {
  params.validate();
  if (!params.n_agents)
    throw std::invalid_argument("simulation requires an agent count");
  const int n = *params.n_agents;

  SystemState s;
  s.bank_initial = params.bank_initial();
  s.bank_cash = s.bank_initial;
  if (!allocation) {
    s.wealth.assign(static_cast<size_t>(n), params.mu);
  } else {
    if (static_cast<int>(allocation->size()) != n)
      throw InvalidAllocationError("allocation lists " +
                                   std::to_string(allocation->size()) +
                                   " agents, expected " + std::to_string(n));
    long long sum = 0;
    for (int v : *allocation) {
      if (v < 0)
        throw InvalidAllocationError("initial allocation must be debt-free");
      sum += v;
    }
    if (sum != params.total_money())
      throw InvalidAllocationError("allocation sums to " + std::to_string(sum) +
                                   ", expected " + std::to_string(params.total_money()));
    s.wealth = *allocation;
  }
  return s;
}

StepOutcome attempt_give(SystemState& state, int giver, int receiver) {
  ++state.events_total;
  int& sg = state.wealth[static_cast<size_t>(giver)];
  if (sg < 1 && state.bank_cash < 1) {
    ++state.events_blocked;
    return StepOutcome::blocked;
  }
  int& sr = state.wealth[static_cast<size_t>(receiver)];
  if (sg <= 0) {  // giver goes one deeper into debt, bank lends a dollar
    --state.bank_cash;
    ++state.debt_total;
    if (state.bank_cash == 0 && !state.first_empty_event)
      state.first_empty_event = state.events_total;
  }
  if (sr < 0) {  // receiver repays one dollar of debt
    ++state.bank_cash;
    --state.debt_total;
  }
  --sg;
  ++sr;
  check_ledger(state);
  return StepOutcome::transfer;
}

StepOutcome step(SystemState& state, const RateFunction& f, double f_max, Rng& rng) {
  const int n = static_cast<int>(state.wealth.size());
  const int giver = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
  const double coin = rng.unit();
  if (coin * f_max >= f(state.wealth[static_cast<size_t>(giver)])) {
    ++state.events_thinned;
    return StepOutcome::thinned;
  }
  int receiver = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - 1)));
  if (receiver >= giver) ++receiver;
  return attempt_give(state, giver, receiver);
}

SimResult run(const ModelParams& params, long long num_events, std::uint64_t seed,
              std::optional<long long> snapshot_every, bool track_occupancy) {
  if (num_events < 0) throw std::invalid_argument("num_events must be nonnegative");
  if (snapshot_every && *snapshot_every <= 0)
    throw std::invalid_argument("snapshot_every must be positive");

  SystemState state = init_state(params);
  const double f_max = params.rate.upper_bound();
  const long long expected_sum = params.total_money();
  const int n = *params.n_agents;
  Rng rng(seed);

  // Occupancy bins span every reachable value.
  const long long occ_lo = -state.bank_initial;
  const long long occ_hi = expected_sum + state.bank_initial;
  std::vector<double> occ;
  if (track_occupancy) occ.assign(static_cast<size_t>(occ_hi - occ_lo + 1), 0.0);
  long long ticks = 0;

  SimResult result;
  result.seed = seed;
  result.params = params;

  while (state.events_total < num_events) {
    if (track_occupancy) {
      for (int v : state.wealth) occ[static_cast<size_t>(v - occ_lo)] += 1.0;
    }
    ++ticks;
    const StepOutcome outcome = step(state, params.rate, f_max, rng);
    if (ticks % kFullRecheckEvery == 0) full_recheck(state, expected_sum);
    if (outcome != StepOutcome::thinned && snapshot_every &&
        state.events_total % *snapshot_every == 0)
      result.snapshots.emplace_back(state.events_total, empirical_distribution(state));
  }
  full_recheck(state, expected_sum);

  if (track_occupancy && ticks > 0) {
    Eigen::ArrayXd probs(static_cast<Eigen::Index>(occ.size()));
    for (size_t i = 0; i < occ.size(); ++i)
      probs[static_cast<Eigen::Index>(i)] = occ[i] / (static_cast<double>(ticks) * n);
    result.occupancy = WealthDistribution(static_cast<int>(occ_lo), probs);
  }

  result.histogram = empirical_distribution(state);
  result.final_state = std::move(state);
  return result;
}

WealthDistribution empirical_distribution(const SystemState& state) {
  if (state.wealth.empty()) throw std::invalid_argument("empty state");
  auto [mn, mx] = std::minmax_element(state.wealth.begin(), state.wealth.end());
  const int lo = std::min(0, *mn);
  const int hi = std::max(0, *mx);
  std::vector<long long> counts(static_cast<size_t>(hi - lo + 1), 0);
  for (int v : state.wealth) ++counts[static_cast<size_t>(v - lo)];
  Eigen::ArrayXd probs(hi - lo + 1);
  for (size_t i = 0; i < counts.size(); ++i)
    probs[static_cast<Eigen::Index>(i)] =
        static_cast<double>(counts[i]) / static_cast<double>(state.wealth.size());
  return WealthDistribution(lo, probs);
}

}  // namespace exlab
