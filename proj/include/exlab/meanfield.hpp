#pragma once

#include <Eigen/Dense>
#include <vector>

#include "exlab/distribution.hpp"
#include "exlab/params.hpp"

namespace exlab {

/// Aggregates of p that drive the dynamics once the bank can run dry:
/// r/d are the rich and indebted proportions, r_tilde/d_tilde their
/// rate-weighted analogues, q0 the probability the bank is empty given
/// those proportions, gamma the resulting per-site deposit rate.
struct DerivedRates {
  double r = 0;
  double d = 0;
  double r_tilde = 0;
  double d_tilde = 0;
  double p0 = 0;
  double q0 = 1;
  double gamma = 0;
};

/// Computes all derived rates. q0 = 1 - r_tilde*d / ((r+p0)(d_tilde+p0)),
/// with q0 := 1 when d = 0 (an empty bank stays empty with nobody to repay
/// debt), clamped to [0,1]. Throws DegenerateDistributionError when d > 0
/// but one of the denominators vanishes.
DerivedRates derived_rates(const WealthDistribution& p, const RateFunction& f);

/// Just the vacancy probability q0.
double bank_vacancy(const WealthDistribution& p, const RateFunction& f);

/// Derivative of p under one of the two generators, on p's window.
struct ApplyResult {
  Eigen::ArrayXd derivative;
  /// Boundary entries of p exceeded the truncation tolerance, so the
  /// window is eating mass it should not.
  bool truncation_warning = false;
};

/// Unconstrained-bank dynamics: out_n = f(n+1)p_{n+1} + lambda p_{n-1}
/// - f(n)p_n - lambda p_n with lambda the mean giving rate of p.
/// Out-of-window neighbors count as zero.
ApplyResult q1_apply(const WealthDistribution& p, const RateFunction& f);

/// Debt-limited dynamics with vacancy probability q0(p) and deposit rate
/// gamma(p); giver moves below zero are damped by 1-q0, repayments flow at
/// gamma. Conserves mass, mean, and mean debt when f(0) = 1.
ApplyResult q2_apply(const WealthDistribution& p, const RateFunction& f);

struct StepDiagnostics {
  double time = 0;
  double mass_defect = 0;  // mass - 1
  double mean_defect = 0;  // mean - mu
  double debt = 0;         // -sum_{n<=-1} n p_n
};

struct TrajectorySegment {
  std::vector<double> times;                   // recorded sample times
  std::vector<WealthDistribution> snapshots;   // state at those times
  std::vector<StepDiagnostics> diagnostics;    // one entry per integration step
  bool truncation_warning = false;
  bool debt_decrease_warning = false;  // debt shrank during the growth phase
  double max_debt_defect = 0;          // phase 2: max |debt - mu*nu| seen
};

struct Phase1Result {
  TrajectorySegment segment;
  double t_star = 0;
  WealthDistribution state{0, 0};  // at t_star
};

/// Integrates the unconstrained dynamics from a nonnegative-support start
/// (mass 1, mean mu, no debt) until the mean debt first reaches mu*nu.
/// The crossing time is bracketed by the fixed RK4 grid and polished by
/// re-integrating the final partial step until |debt - mu*nu| <= 1e-9.
/// Throws Phase1TimeoutError when no crossing happens by t_max.
Phase1Result integrate_phase1(const WealthDistribution& p0, const ModelParams& params,
                              double dt, double t_max,
                              const std::vector<double>& snapshot_times = {});

/// Integrates the debt-limited dynamics from t_start to t_end. Entry state
/// must carry mean debt mu*nu within 1e-6. Throws InstabilityError when
/// entries dip below -100*kEpsPos or the mass defect passes 1e-6.
TrajectorySegment integrate_phase2(const WealthDistribution& p, const ModelParams& params,
                                   double dt, double t_start, double t_end,
                                   const std::vector<double>& snapshot_times = {});

enum class Phase { one, two };

struct TwoPhaseTrajectory {
  std::vector<double> times;
  std::vector<WealthDistribution> snapshots;
  std::vector<Phase> phase_labels;  // one for t <= t_star, two after
  double t_star = 0;
  std::vector<StepDiagnostics> diagnostics;
  bool truncation_warning = false;
  bool debt_decrease_warning = false;
  double max_debt_defect_phase2 = 0;
};

/// Phase 1 until the debt target, then phase 2 until t_end. Snapshot times
/// are honored exactly (steps are shortened to land on them); the crossing
/// state at t_star and the final state are always recorded.
TwoPhaseTrajectory run_two_phase(const ModelParams& params, const WealthDistribution& p_init,
                                 double dt, double t_end,
                                 const std::vector<double>& snapshot_times = {});

}  // namespace exlab
