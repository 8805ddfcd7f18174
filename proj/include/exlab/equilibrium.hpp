#pragma once

#include <array>

#include "exlab/distribution.hpp"

namespace exlab {

/// Stationary solution of the debt-limited dynamics for the star rate:
/// geometric tail ratios beta_plus (rich side), beta_minus (debt side) and
/// center mass p0_star, all in (0,1), together with the quartic whose root
/// beta_plus is and the defects of the mass/mean/debt constraints.
struct EquilibriumSolution {
  int mu = 1;
  int nu = 1;
  double beta_plus = 0;
  double beta_minus = 0;
  double p0_star = 0;
  std::array<double, 5> quartic{};    // c0..c4, coefficient of beta^k at index k
  std::array<double, 3> residuals{};  // mass-1, mean-mu, debt-mu*nu (closed form)
  int admissible_roots_found = 0;
};

/// Coefficients c0..c4 of the quartic in beta_plus obtained by eliminating
/// p0 and beta_minus from the three constraints.
std::array<double, 5> quartic_coefficients(int mu, int nu);

/// Finds the admissible equilibrium: dense scan of (0,1) for sign changes
/// of the quartic, bisection, Newton polish, then back-substitution
///   p0 = (1-b)^3 mu (1+nu) / (b^2+b),
///   beta_minus = smaller root of x^2 - (2 + p0/(mu nu)) x + 1 = 0.
/// A root is admissible when all three values lie in (0,1) and the
/// closed-form constraint residuals are each <= 1e-10. Throws
/// NoEquilibriumError / AmbiguousEquilibriumError on zero / several.
EquilibriumSolution solve_equilibrium(int mu, int nu);

/// The equilibrium ansatz on a window: p_n = p0 b+^n / (f(n)...f(1)f(0))
/// for n >= 0 and p0 b-^{-n} / (f(n)...f(-1)f(0)) for n <= 0. Requires
/// f(0) = 1 (both branches then agree at 0). No renormalization. Throws
/// NonNormalizableError when the entries grow toward a window edge, and
/// rejects windows whose estimated truncated tail reaches 1e-12.
WealthDistribution equilibrium_distribution(const EquilibriumSolution& sol,
                                            const RateFunction& f, int window_min,
                                            int window_max);

/// Mass/mean/debt defects of the constructed distribution, by direct
/// summation over the window: (mass-1, mean-mu, debt-mu*nu).
std::array<double, 3> constraint_residuals(const EquilibriumSolution& sol,
                                           const RateFunction& f, int window_min,
                                           int window_max);

}  // namespace exlab
