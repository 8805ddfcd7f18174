#include "exlab/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "exlab/errors.hpp"

namespace exlab {

namespace {

constexpr double kRootDedup = 1e-10;
constexpr double kResidualTol = 1e-10;
constexpr double kQuarticTol = 1e-12;
constexpr double kTailMassTol = 1e-12;

double eval_poly(const std::array<double, 5>& c, double x) {
  return (((c[4] * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0];
}

double eval_dpoly(const std::array<double, 5>& c, double x) {
  return ((4 * c[4] * x + 3 * c[3]) * x + 2 * c[2]) * x + c[1];
}

double bisect(const std::array<double, 5>& c, double lo, double hi) {
  double flo = eval_poly(c, lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = eval_poly(c, mid);
    if (fmid == 0.0 || hi - lo < 1e-15) return mid;
    if ((flo < 0) == (fmid < 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double newton_polish(const std::array<double, 5>& c, double x) {
  for (int it = 0; it < 100; ++it) {
    const double d = eval_dpoly(c, x);
    if (d == 0.0) break;
    const double step = eval_poly(c, x) / d;
    x -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return x;
}

struct Candidate {
  double beta_plus, beta_minus, p0;
  std::array<double, 3> residuals;
};

// Closed-form mass/mean/debt defects of the geometric-tail ansatz for the
// star rate.
std::array<double, 3> closed_form_residuals(double bp, double bm, double p0, int mu,
                                            int nu) {
  const double omp = 1 - bp, omm = 1 - bm;
  const double mass = p0 * (1 + bp / (omp * omp) + bm / omm);
  const double mean = p0 * (bp * (1 + bp) / (omp * omp * omp) - bm / (omm * omm));
  const double debt = p0 * bm / (omm * omm);
  return {mass - 1.0, mean - mu, debt - static_cast<double>(mu) * nu};
}

}  // namespace

std::array<double, 5> quartic_coefficients(int mu, int nu) {
  if (mu < 1 || nu < 1) throw std::invalid_argument("mu and nu must be >= 1");
  const double m = mu, v = nu;
  const double a = 1.0 / (m * (1 + v));      // 1/(mu(1+nu))
  const double b = v / (1 + v);              // nu/(1+nu)
  const double a2 = a * a;                   // 1/(mu^2 (1+nu)^2)
  return {1 - b - a,
          a2 + 2 * b - 3,
          2 * a2 + 4,
          a2 - 2 * b - 3,
          a + b + 1};
}

EquilibriumSolution solve_equilibrium(int mu, int nu) {
  const std::array<double, 5> c = quartic_coefficients(mu, nu);
  const double target_debt = static_cast<double>(mu) * nu;

  // Sign-change scan of (0,1), endpoints excluded (beta = 0 can be an
  // exact root but is never admissible).
  constexpr int kScan = 1000;
  std::vector<double> roots;
  double prev_x = 1.0 / kScan, prev_f = eval_poly(c, prev_x);
  if (prev_f == 0.0) roots.push_back(prev_x);
  for (int i = 2; i < kScan; ++i) {
    const double x = static_cast<double>(i) / kScan;
    const double fx = eval_poly(c, x);
    if (fx == 0.0)
      roots.push_back(x);
    else if ((prev_f < 0) != (fx < 0))
      roots.push_back(bisect(c, prev_x, x));
    prev_x = x;
    prev_f = fx;
  }
  for (double& r : roots) r = newton_polish(c, r);

  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) < kRootDedup; }),
              roots.end());

  std::vector<Candidate> admissible;
  for (double bp : roots) {
    if (!(bp > 0 && bp < 1)) continue;
    if (std::abs(eval_poly(c, bp)) > kQuarticTol) continue;
    const double omp = 1 - bp;
    const double p0 = omp * omp * omp * mu * (1 + nu) / (bp * bp + bp);
    if (!(p0 > 0 && p0 < 1)) continue;
    // Debt constraint p0*bm/(1-bm)^2 = mu*nu as a quadratic in bm; the two
    // roots multiply to 1, so the admissible one is the smaller.
    const double cc = p0 / target_debt;
    const double disc = (2 + cc) * (2 + cc) - 4;
    const double bm = ((2 + cc) - std::sqrt(disc)) / 2;
    if (!(bm > 0 && bm < 1)) continue;
    const std::array<double, 3> res = closed_form_residuals(bp, bm, p0, mu, nu);
    if (std::abs(res[0]) > kResidualTol || std::abs(res[1]) > kResidualTol ||
        std::abs(res[2]) > kResidualTol)
      continue;
    admissible.push_back({bp, bm, p0, res});
  }

  if (admissible.empty())
    throw NoEquilibriumError("no admissible root in (0,1) for mu=" + std::to_string(mu) +
                             ", nu=" + std::to_string(nu));
  if (admissible.size() > 1) {
    std::string list;
    for (const Candidate& a : admissible)
      list += (list.empty() ? "" : ", ") + std::to_string(a.beta_plus);
    throw AmbiguousEquilibriumError("multiple admissible roots: " + list);
  }

  const Candidate& a = admissible.front();
  EquilibriumSolution sol;
  sol.mu = mu;
  sol.nu = nu;
  sol.beta_plus = a.beta_plus;
  sol.beta_minus = a.beta_minus;
  sol.p0_star = a.p0;
  sol.quartic = c;
  sol.residuals = a.residuals;
  sol.admissible_roots_found = static_cast<int>(admissible.size());
  return sol;
}

WealthDistribution equilibrium_distribution(const EquilibriumSolution& sol,
                                            const RateFunction& f, int window_min,
                                            int window_max) {
  if (f(0) != 1.0)
    throw std::invalid_argument("equilibrium ansatz requires f(0) = 1");
  WealthDistribution p(window_min, window_max);
  p.set(0, sol.p0_star);
  for (int n = 1; n <= window_max; ++n)
    p.set(n, p.prob(n - 1) * sol.beta_plus / f(n));
  for (int n = -1; n >= window_min; --n)
    p.set(n, p.prob(n + 1) * sol.beta_minus / f(n));

  auto check_tail = [](double edge, double inner, const char* side) {
    if (edge <= 0) return;  // degenerate window, nothing to truncate
    if (edge >= inner)
      throw NonNormalizableError(std::string("ansatz entries grow toward the ") + side +
                                 " window edge; the tail sum diverges and the result "
                                 "cannot be a probability mass function");
    const double ratio = edge / inner;
    const double tail = edge * ratio / (1 - ratio);
    if (tail >= kTailMassTol)
      throw std::invalid_argument(std::string("window too small: estimated ") + side +
                                  " tail mass " + std::to_string(tail));
  };
  if (window_max >= 1) check_tail(p.prob(window_max), p.prob(window_max - 1), "upper");
  if (window_min <= -1) check_tail(p.prob(window_min), p.prob(window_min + 1), "lower");
  return p;
}

std::array<double, 3> constraint_residuals(const EquilibriumSolution& sol,
                                           const RateFunction& f, int window_min,
                                           int window_max) {
  const WealthDistribution p = equilibrium_distribution(sol, f, window_min, window_max);
  const Moments m = moments(p);
  return {m.mass - 1.0, m.mean - sol.mu,
          debt_level(p) - static_cast<double>(sol.mu) * sol.nu};
}

}  // namespace exlab
