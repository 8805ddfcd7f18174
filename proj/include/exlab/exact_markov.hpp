#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "exlab/rate_function.hpp"

namespace exlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// One assignment of wealth values to N agents.
using Configuration = std::vector<int>;

/// Total debt carried by a configuration: sum of negative parts.
long long total_debt(const Configuration& xi);

/// Binomial coefficient with the conventions the closed-form counting
/// needs on degenerate inputs:
///   C(-1,-1) = 1; C(m,k) = 0 for any other k < 0; C(m,k) = 0 for m < k >= 0.
/// The first two make empty-sum/empty-product boundary cases come out right.
BigInt binomial(long long m, long long k);

/// Number of ways to write a as an ordered sum of b nonnegative integers:
/// C(a+b-1, b-1). For b = 0 this is 1 if a = 0 and 0 otherwise.
BigInt stars_bars(long long a, long long b);

/// s(n,r) = sum_{i=1}^n i*C(n-i+r-1, 2r-1), by direct summation.
/// Cross-check: equals C(n+r, 2r+1).
BigInt weighted_sum_s(long long n, long long r);

/// u(n,r) = sum_{i=1}^n i*C(n-i+r-1, 2r), by direct summation.
/// Cross-check: equals C(n+r, 2r+2).
BigInt weighted_sum_u(long long n, long long r);

/// sum over ordered (x_1..x_r >= 0) with sum n of the product x_1*...*x_r,
/// via the closed form C(n+r-1, 2r-1). For r = 0: 1 if n = 0 else 0.
BigInt product_sum(long long n, long long r);

/// Total stationary weight of configurations with exactly a dollars of
/// debt spread over exactly b nonpositive agents:
/// C(N,b) * stars_bars(a,b) * product_sum(M+a, N-b).
BigInt phi_count(long long a, long long b, long long n_agents, long long money,
                 long long bank);

/// Closed-form normalizer: sum of theta over all reachable configurations,
/// as the double sum of phi_count over a <= bank and b <= N. The b = N term
/// only contributes when M + a = 0 but is needed for the degenerate
/// sub-calls made by limiting_marginal.
BigInt varphi(long long n_agents, long long money, long long bank);

/// Number of reachable configurations (sum M, total debt <= bank); used as
/// the enumeration guard and as a counting oracle.
BigInt configuration_count(long long n_agents, long long money, long long bank);

/// Exact rational value of f at n. Table values are doubles and convert
/// exactly (they are dyadic); throws UnsupportedRateError for exponential.
Rational rational_rate(const RateFunction& f, int n);

/// Unnormalized reversible weight: product over agents of
/// prod_{j=-bank}^{xi(i)} 1/f(j). For the star rate this collapses to the
/// product of the positive entries of xi.
Rational theta_weight(const Configuration& xi, const RateFunction& f, long long bank);

/// All reachable configurations with exact stationary weights.
struct ExactDistribution {
  int n_agents;
  long long money;
  long long bank;
  std::vector<Configuration> configs;
  std::vector<Rational> weights;  // theta per configuration
  Rational normalizer;            // sum of weights
};

/// Brute-force enumeration of every configuration with the given agent
/// count, total money and debt capacity. Throws TooLargeError when the
/// exact configuration count exceeds max_configs.
ExactDistribution enumerate_stationary(int n_agents, long long money, long long bank,
                                       const RateFunction& f,
                                       long long max_configs = 10'000'000);

/// Stationary probability that the first agent holds n (agents are
/// exchangeable, so the index does not matter).
Rational marginal(const ExactDistribution& dist, int n);

/// Closed-form stationary marginal for the star rate:
///   n  > 0: n * varphi(N-1, M-n, B) / varphi(N, M, B)
///   n <= 0: varphi(N-1, M-n, B+n) / varphi(N, M, B)
/// and 0 outside [-B, M+B].
Rational limiting_marginal(int n, long long n_agents, long long money, long long bank);

}  // namespace exlab
