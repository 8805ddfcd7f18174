#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "exlab/equilibrium.hpp"
#include "exlab/errors.hpp"

using namespace exlab;

namespace {

double horner(const std::array<double, 5>& c, double x) {
  double acc = 0.0;
  for (int k = 4; k >= 0; --k) acc = acc * x + c[k];
  return acc;
}

}  // namespace

TEST_CASE("quartic coefficients") {
  const auto c = quartic_coefficients(1, 1);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == -1.75);
  CHECK(c[2] == 4.5);
  CHECK(c[3] == -3.75);
  CHECK(c[4] == 2.0);

  CHECK(std::abs(horner(c, 0.5852)) < 5e-4);

  for (int mu = 1; mu <= 6; ++mu) {
    for (int nu = 1; nu <= 6; ++nu) {
      const auto q = quartic_coefficients(mu, nu);
      CHECK(q[2] > 0.0);
      CHECK(q[4] > 0.0);
    }
  }
}

TEST_CASE("unit parameters reproduce the printed solution") {
  const auto sol = solve_equilibrium(1, 1);
  CHECK(std::abs(sol.beta_plus - 0.5852) <= 5e-4);
  CHECK(std::abs(sol.p0_star - 0.15386) <= 5e-4);
  CHECK(std::abs(sol.beta_minus - 0.6772) <= 5e-4);
  CHECK(sol.admissible_roots_found == 1);

  CHECK(std::abs(horner(sol.quartic, sol.beta_plus)) <= 1e-12);
  for (double r : sol.residuals) CHECK(std::abs(r) <= 1e-10);

  // With c0 = 0 the admissible root solves the cubic factor.
  const double b = sol.beta_plus;
  CHECK(std::abs(2 * b * b * b - 3.75 * b * b + 4.5 * b - 1.75) <= 1e-10);

  // Printed back-substitution identities.
  CHECK(std::abs(sol.p0_star - (-11 + 29 * b - 8 * b * b) / 21.0) <= 1e-6);
  CHECK(std::abs(sol.beta_minus - (25 - 15 * b + 8 * b * b) / 28.0) <= 1e-6);

  // beta_minus is the in-(0,1) root of x^2 - (2 + p0/(mu nu)) x + 1.
  const double c = sol.p0_star;
  const double bm = sol.beta_minus;
  CHECK(std::abs(bm * bm - (2 + c) * bm + 1) <= 1e-12);
  CHECK(bm < 1.0);
}

TEST_CASE("parameter sweep finds a unique admissible root") {
  for (int mu = 1; mu <= 4; ++mu) {
    for (int nu = 1; nu <= 4; ++nu) {
      const auto sol = solve_equilibrium(mu, nu);
      CHECK(sol.beta_plus > 0.0);
      CHECK(sol.beta_plus < 1.0);
      CHECK(sol.beta_minus > 0.0);
      CHECK(sol.beta_minus < 1.0);
      CHECK(sol.p0_star > 0.0);
      CHECK(sol.p0_star < 1.0);
      CHECK(sol.admissible_roots_found == 1);
      CHECK(std::abs(horner(sol.quartic, sol.beta_plus)) <= 1e-12);
      for (double r : sol.residuals) CHECK(std::abs(r) <= 1e-10);
    }
  }
}

TEST_CASE("star-rate equilibrium distribution") {
  const auto sol = solve_equilibrium(1, 1);
  const auto f = RateFunction::star();
  const auto p = equilibrium_distribution(sol, f, -150, 200);

  CHECK(p.prob(0) == sol.p0_star);
  CHECK(p.prob(1) == doctest::Approx(0.09004).epsilon(1e-3));
  CHECK(p.prob(-1) == doctest::Approx(0.10419).epsilon(1e-3));
  for (int n = 1; n <= 6; ++n) {
    const double expected = n * sol.p0_star * std::pow(sol.beta_plus, n);
    CHECK(p.prob(n) == doctest::Approx(expected).epsilon(1e-12));
  }
  for (int n = 1; n <= 6; ++n) {
    const double expected = sol.p0_star * std::pow(sol.beta_minus, n);
    CHECK(p.prob(-n) == doctest::Approx(expected).epsilon(1e-12));
  }

  const auto m = moments(p);
  CHECK(std::abs(m.mass - 1.0) <= 1e-10);
  CHECK(std::abs(m.mean - 1.0) <= 1e-10);
  CHECK(std::abs(debt_level(p) - 1.0) <= 1e-10);

  // Window sum of the debt branch against its geometric closed form.
  double neg_mass = 0.0;
  for (int n = -150; n <= -1; ++n) neg_mass += p.prob(n);
  const double closed = sol.p0_star * sol.beta_minus / (1.0 - sol.beta_minus);
  CHECK(neg_mass == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("constraint residuals on a window") {
  const auto sol = solve_equilibrium(1, 1);
  const auto f = RateFunction::star();
  const auto res = constraint_residuals(sol, f, -150, 200);
  for (double r : res) CHECK(std::abs(r) <= 1e-10);

  auto bent = sol;
  bent.beta_plus += 0.01;
  const auto bad = constraint_residuals(bent, f, -150, 200);
  CHECK(std::abs(bad[1]) > 1e-3);
}

TEST_CASE("abs-variant debt branch") {
  const auto sol = solve_equilibrium(1, 1);
  const auto p = equilibrium_distribution(sol, RateFunction::abs_variant(), -100, 120);
  for (int n = 1; n <= 5; ++n) {
    const double expected = n * sol.p0_star * std::pow(sol.beta_minus, n);
    CHECK(p.prob(-n) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("distribution construction failure modes") {
  const auto sol = solve_equilibrium(1, 1);

  // f(0) != 1 breaks the two-branch normalization at the origin.
  const auto off_center = RateFunction::table({{0, 0.5}}, 1.0);
  CHECK_THROWS_AS(equilibrium_distribution(sol, off_center, -30, 30),
                  std::invalid_argument);

  // Exponential rate: the ansatz entries grow without bound.
  CHECK_THROWS_AS(equilibrium_distribution(sol, RateFunction::exponential(0.5), -10, 30),
                  NonNormalizableError);

  // Window whose truncated tail is far above 1e-12.
  CHECK_THROWS_WITH_AS(equilibrium_distribution(sol, RateFunction::star(), -20, 30),
                       doctest::Contains("window"), std::invalid_argument);
}
