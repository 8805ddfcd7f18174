#include "exlab/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "exlab/errors.hpp"

namespace exlab {

namespace {

constexpr double kDebtCrossTol = 1e-9;   // polish target for the phase switch
constexpr double kMassDefectLimit = 1e-6;
constexpr double kNegativityLimit = 100 * kEpsPos;
constexpr double kTimeMatchTol = 1e-9;   // snapshot times vs accumulated time

std::string fmt(double v) { return std::to_string(v); }

}  // namespace

DerivedRates derived_rates(const WealthDistribution& p, const RateFunction& f) {
  const Eigen::ArrayXd& v = p.values();
  const Eigen::ArrayXd fv = rate_values_on_window(f, p.window_min(), p.window_max());
  const int z = p.zero_index();
  const int m = p.size();

  DerivedRates out;
  out.p0 = v[z];
  out.d = v.head(z).sum();
  out.r = v.tail(m - z - 1).sum();
  out.d_tilde = (v.head(z) * fv.head(z)).sum();
  out.r_tilde = (v.tail(m - z - 1) * fv.tail(m - z - 1)).sum();

  if (out.d == 0.0) {
    out.q0 = 1.0;
  } else {
    const double den1 = out.r + out.p0;
    const double den2 = out.d_tilde + out.p0;
    if (den1 == 0.0 || den2 == 0.0)
      throw DegenerateDistributionError(
          "indebted mass present but no rich-or-zero mass to balance it");
    out.q0 = std::clamp(1.0 - out.r_tilde * out.d / (den1 * den2), 0.0, 1.0);
  }
  out.gamma = out.r_tilde + (out.d_tilde + out.p0) * (1.0 - out.q0);
  return out;
}

double bank_vacancy(const WealthDistribution& p, const RateFunction& f) {
  return derived_rates(p, f).q0;
}

ApplyResult q1_apply(const WealthDistribution& p, const RateFunction& f) {
  const Eigen::ArrayXd& v = p.values();
  const Eigen::ArrayXd fv = rate_values_on_window(f, p.window_min(), p.window_max());
  const int m = p.size();

  const Eigen::ArrayXd fp = fv * v;
  const double lambda = fp.sum();

  Eigen::ArrayXd out = -fp - lambda * v;
  if (m > 1) {
    out.head(m - 1) += fp.tail(m - 1);        // f(n+1) p_{n+1}
    out.tail(m - 1) += lambda * v.head(m - 1);  // lambda p_{n-1}
  }
  return {std::move(out), !well_truncated(p)};
}

ApplyResult q2_apply(const WealthDistribution& p, const RateFunction& f) {
  const Eigen::ArrayXd& v = p.values();
  const Eigen::ArrayXd fv = rate_values_on_window(f, p.window_min(), p.window_max());
  const int m = p.size();
  const int z = p.zero_index();
  const DerivedRates rates = derived_rates(p, f);
  const double damp = 1.0 - rates.q0;
  const double gamma = rates.gamma;

  auto at = [&](int i) { return (i >= 0 && i < m) ? v[i] : 0.0; };
  auto fat = [&](int i) { return (i >= 0 && i < m) ? fv[i] * v[i] : 0.0; };

  Eigen::ArrayXd out(m);
  for (int i = 0; i < m; ++i) {
    const double diffusion = gamma * (at(i - 1) - v[i]);
    if (i < z)
      out[i] = damp * (fat(i + 1) - fv[i] * v[i]) + diffusion;
    else if (i == z)
      out[i] = fat(i + 1) - damp * v[i] + diffusion;
    else
      out[i] = fat(i + 1) - fv[i] * v[i] + diffusion;
  }
  return {std::move(out), !well_truncated(p)};
}

namespace {

template <typename Apply>
WealthDistribution rk4_step(const WealthDistribution& p, double h, Apply&& apply,
                            bool& truncation_warning) {
  auto eval = [&](const WealthDistribution& q) {
    ApplyResult r = apply(q);
    truncation_warning = truncation_warning || r.truncation_warning;
    return std::move(r.derivative);
  };
  const int lo = p.window_min();
  const Eigen::ArrayXd& v = p.values();
  Eigen::ArrayXd k1 = eval(p);
  Eigen::ArrayXd k2 = eval(WealthDistribution(lo, v + (h / 2) * k1));
  Eigen::ArrayXd k3 = eval(WealthDistribution(lo, v + (h / 2) * k2));
  Eigen::ArrayXd k4 = eval(WealthDistribution(lo, v + h * k3));
  return WealthDistribution(lo, v + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4));
}

StepDiagnostics diagnostics_at(double t, const WealthDistribution& p, double mu) {
  const Moments m = moments(p);
  return {t, m.mass - 1.0, m.mean - mu, debt_level(p)};
}

void check_stability(const WealthDistribution& p, double t) {
  if (min_entry(p) < -kNegativityLimit)
    throw InstabilityError("negative probability " + fmt(min_entry(p)) + " at t=" +
                           fmt(t) + "; try a smaller dt");
  if (std::abs(moments(p).mass - 1.0) > kMassDefectLimit)
    throw InstabilityError("mass defect " + fmt(moments(p).mass - 1.0) + " at t=" +
                           fmt(t) + "; try a smaller dt");
}

// Next requested sample time strictly after t, or +inf.
double next_sample(const std::vector<double>& times, double t) {
  for (double s : times)
    if (s > t + kTimeMatchTol) return s;
  return std::numeric_limits<double>::infinity();
}

void record_if_sampled(TrajectorySegment& seg, const std::vector<double>& times, double t,
                       const WealthDistribution& p) {
  for (double s : times)
    if (std::abs(s - t) <= kTimeMatchTol) {
      seg.times.push_back(t);
      seg.snapshots.push_back(p);
      return;
    }
}

std::vector<double> sorted_unique(std::vector<double> times) {
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return std::abs(a - b) <= kTimeMatchTol; }),
              times.end());
  return times;
}

void validate_nonnegative_start(const WealthDistribution& p, double mu) {
  const Moments m = moments(p);
  if (std::abs(m.mass - 1.0) > 1e-9)
    throw std::invalid_argument("start distribution mass is " + fmt(m.mass));
  if (std::abs(m.mean - mu) > 1e-9 * std::max(1.0, mu))
    throw std::invalid_argument("start distribution mean is " + fmt(m.mean) +
                                ", expected " + fmt(mu));
  if (min_entry(p) < -kEpsPos)
    throw std::invalid_argument("start distribution has a negative entry");
  for (int n = p.window_min(); n < 0; ++n)
    if (p.prob(n) > kEpsPos)
      throw std::invalid_argument("start distribution carries debt at n=" +
                                  std::to_string(n));
}

}  // namespace

Phase1Result integrate_phase1(const WealthDistribution& p0, const ModelParams& params,
                              double dt, double t_max,
                              const std::vector<double>& snapshot_times) {
  params.validate();
  if (dt <= 0) throw std::invalid_argument("dt must be positive");
  const double mu = params.mu;
  validate_nonnegative_start(p0, mu);
  const double target = static_cast<double>(params.mu) * params.nu;
  const std::vector<double> samples = sorted_unique(snapshot_times);
  const auto apply = [&](const WealthDistribution& q) { return q1_apply(q, params.rate); };

  Phase1Result result;
  TrajectorySegment& seg = result.segment;
  WealthDistribution p = p0;
  double t = 0;
  double debt = debt_level(p);
  seg.diagnostics.push_back(diagnostics_at(t, p, mu));
  record_if_sampled(seg, samples, t, p);

  while (t < t_max - kTimeMatchTol) {
    const double h = std::min({dt, next_sample(samples, t) - t, t_max - t});
    WealthDistribution p_next = rk4_step(p, h, apply, seg.truncation_warning);
    const double debt_next = debt_level(p_next);
    if (debt_next < debt - 1e-10) seg.debt_decrease_warning = true;

    if (debt_next >= target) {
      // Crossing inside (t, t+h]. Start from the linear estimate, then
      // polish by re-integrating the partial step from the pre-crossing
      // state (regula falsi with bisection fallback; the debt curve is
      // smooth and increasing here).
      double lo = 0, hi = h;
      double g_lo = debt - target, g_hi = debt_next - target;
      double step = h * (-g_lo) / (g_hi - g_lo);
      WealthDistribution p_cross = p_next;
      for (int it = 0; it < 60; ++it) {
        if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
        p_cross = rk4_step(p, step, apply, seg.truncation_warning);
        const double g = debt_level(p_cross) - target;
        if (std::abs(g) <= kDebtCrossTol) break;
        if (g > 0) {
          hi = step;
          g_hi = g;
        } else {
          lo = step;
          g_lo = g;
        }
        if (hi - lo < 1e-15) break;
        step = lo + (hi - lo) * (-g_lo) / (g_hi - g_lo);
      }
      t += step;
      p = std::move(p_cross);
      check_stability(p, t);
      seg.diagnostics.push_back(diagnostics_at(t, p, mu));
      seg.times.push_back(t);
      seg.snapshots.push_back(p);
      result.t_star = t;
      result.state = p;
      return result;
    }

    t += h;
    p = std::move(p_next);
    debt = debt_next;
    check_stability(p, t);
    seg.diagnostics.push_back(diagnostics_at(t, p, mu));
    record_if_sampled(seg, samples, t, p);
  }
  throw Phase1TimeoutError("debt never reached " + fmt(target) + " by t=" + fmt(t_max) +
                           "; final debt " + fmt(debt));
}

TrajectorySegment integrate_phase2(const WealthDistribution& p_entry, const ModelParams& params,
                                   double dt, double t_start, double t_end,
                                   const std::vector<double>& snapshot_times) {
  params.validate();
  if (dt <= 0) throw std::invalid_argument("dt must be positive");
  if (t_end < t_start) throw std::invalid_argument("t_end before t_start");
  const double mu = params.mu;
  const double target = static_cast<double>(params.mu) * params.nu;
  if (std::abs(debt_level(p_entry) - target) > 1e-6)
    throw std::invalid_argument("phase 2 entry debt is " + fmt(debt_level(p_entry)) +
                                ", expected " + fmt(target));
  const std::vector<double> samples = sorted_unique(snapshot_times);
  const auto apply = [&](const WealthDistribution& q) { return q2_apply(q, params.rate); };

  TrajectorySegment seg;
  WealthDistribution p = p_entry;
  double t = t_start;
  seg.diagnostics.push_back(diagnostics_at(t, p, mu));
  seg.max_debt_defect = std::abs(debt_level(p) - target);
  record_if_sampled(seg, samples, t, p);

  while (t < t_end - kTimeMatchTol) {
    const double h = std::min({dt, next_sample(samples, t) - t, t_end - t});
    p = rk4_step(p, h, apply, seg.truncation_warning);
    t += h;
    check_stability(p, t);
    seg.diagnostics.push_back(diagnostics_at(t, p, mu));
    seg.max_debt_defect = std::max(seg.max_debt_defect, std::abs(debt_level(p) - target));
    record_if_sampled(seg, samples, t, p);
  }
  if (seg.times.empty() || std::abs(seg.times.back() - t) > kTimeMatchTol) {
    seg.times.push_back(t);
    seg.snapshots.push_back(p);
  }
  return seg;
}

TwoPhaseTrajectory run_two_phase(const ModelParams& params, const WealthDistribution& p_init,
                                 double dt, double t_end,
                                 const std::vector<double>& snapshot_times) {
  Phase1Result phase1 = integrate_phase1(p_init, params, dt, t_end, snapshot_times);

  std::vector<double> late;
  for (double s : snapshot_times)
    if (s > phase1.t_star + kTimeMatchTol && s <= t_end + kTimeMatchTol) late.push_back(s);
  TrajectorySegment phase2 =
      integrate_phase2(phase1.state, params, dt, phase1.t_star, t_end, late);

  TwoPhaseTrajectory traj;
  traj.t_star = phase1.t_star;
  traj.truncation_warning =
      phase1.segment.truncation_warning || phase2.truncation_warning;
  traj.debt_decrease_warning = phase1.segment.debt_decrease_warning;
  traj.max_debt_defect_phase2 = phase2.max_debt_defect;

  traj.times = phase1.segment.times;
  traj.snapshots = phase1.segment.snapshots;
  traj.times.insert(traj.times.end(), phase2.times.begin(), phase2.times.end());
  traj.snapshots.insert(traj.snapshots.end(), phase2.snapshots.begin(),
                        phase2.snapshots.end());
  for (double t : traj.times)
    traj.phase_labels.push_back(t <= traj.t_star + kTimeMatchTol ? Phase::one : Phase::two);

  traj.diagnostics = phase1.segment.diagnostics;
  // Phase 2's first diagnostic duplicates the crossing state.
  traj.diagnostics.insert(traj.diagnostics.end(), phase2.diagnostics.begin() + 1,
                          phase2.diagnostics.end());
  return traj;
}

}  // namespace exlab
