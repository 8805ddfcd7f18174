#include "exlab/exact_markov.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "exlab/errors.hpp"

namespace exlab {

long long total_debt(const Configuration& xi) {
  long long debt = 0;
  for (int v : xi)
    if (v < 0) debt -= v;
  return debt;
}

BigInt binomial(long long m, long long k) {
  if (k < 0) return (m == -1 && k == -1) ? 1 : 0;
  if (m < k) return 0;
  k = std::min(k, m - k);
  BigInt prod = 1;
  for (long long i = 1; i <= k; ++i) {
    prod *= (m - k + i);
    prod /= i;  // exact: prefix of a binomial is integral
  }
  return prod;
}

BigInt stars_bars(long long a, long long b) { return binomial(a + b - 1, b - 1); }

BigInt weighted_sum_s(long long n, long long r) {
  BigInt sum = 0;
  for (long long i = 1; i <= n; ++i) sum += i * binomial(n - i + r - 1, 2 * r - 1);
  return sum;
}

BigInt weighted_sum_u(long long n, long long r) {
  BigInt sum = 0;
  for (long long i = 1; i <= n; ++i) sum += i * binomial(n - i + r - 1, 2 * r);
  return sum;
}

BigInt product_sum(long long n, long long r) {
  // The binomial conventions cover r = 0 (1 iff n = 0) and n < r (0).
  return binomial(n + r - 1, 2 * r - 1);
}

BigInt phi_count(long long a, long long b, long long n_agents, long long money,
                 long long bank) {
  (void)bank;  // the caller's a <= bank range is what uses it
  return binomial(n_agents, b) * stars_bars(a, b) * product_sum(money + a, n_agents - b);
}

BigInt varphi(long long n_agents, long long money, long long bank) {
  BigInt sum = 0;
  for (long long a = 0; a <= bank; ++a)
    for (long long b = 0; b <= n_agents; ++b) sum += phi_count(a, b, n_agents, money, bank);
  return sum;
}

BigInt configuration_count(long long n_agents, long long money, long long bank) {
  // Same decomposition as varphi but counting each configuration once:
  // b nonpositive agents sharing a dollars of debt, the rest strictly
  // positive sharing money + a.
  BigInt sum = 0;
  for (long long a = 0; a <= bank; ++a)
    for (long long b = 0; b <= n_agents; ++b)
      sum += binomial(n_agents, b) * stars_bars(a, b) *
             binomial(money + a - 1, n_agents - b - 1);
  return sum;
}

Rational rational_rate(const RateFunction& f, int n) {
  switch (f.kind()) {
    case RateFunction::Kind::constant:
      return 1;
    case RateFunction::Kind::star:
      return n <= 1 ? Rational(1) : Rational(n - 1, n);
    case RateFunction::Kind::abs_variant: {
      int a = n < 0 ? -n : n;
      return a <= 1 ? Rational(1) : Rational(a - 1, a);
    }
    case RateFunction::Kind::table: {
      const auto& tab = f.table_values();
      auto it = tab.find(n);
      double v = it != tab.end() ? it->second : f.table_fallback();
      return Rational(v);  // doubles are dyadic, so this is exact
    }
    case RateFunction::Kind::exponential:
      break;
  }
  throw UnsupportedRateError("exact stationary weights need a rate with exact "
                             "rational values; exponential is not supported");
}

Rational theta_weight(const Configuration& xi, const RateFunction& f, long long bank) {
  if (f.kind() == RateFunction::Kind::star) {
    BigInt prod = 1;
    for (int v : xi)
      if (v > 0) prod *= v;
    return Rational(prod);
  }
  Rational prod = 1;
  for (int v : xi)
    for (long long j = -bank; j <= v; ++j) prod /= rational_rate(f, static_cast<int>(j));
  return prod;
}

namespace {

struct Enumerator {
  int n_agents;
  int max_coord;  // money + bank
  const std::vector<Rational>& prefix;  // prefix[v + bank] = prod_{j<=v} 1/f(j)
  long long bank;
  ExactDistribution& out;
  Configuration cur;

  void emit(const Rational& weight) {
    out.configs.push_back(cur);
    out.weights.push_back(weight);
    out.normalizer += weight;
  }

  // idx agents already fixed; s money left to place; rd debt allowance left.
  void recurse(int idx, long long s, long long rd, const Rational& acc) {
    if (idx == n_agents - 1) {
      if (s >= -rd && s <= max_coord) {
        cur[idx] = static_cast<int>(s);
        emit(acc * prefix[static_cast<size_t>(s + bank)]);
      }
      return;
    }
    const long long remaining = n_agents - 1 - idx;
    const long long hi = std::min<long long>(max_coord, s + rd);
    for (long long v = -rd; v <= hi; ++v) {
      const long long rd2 = rd - (v < 0 ? -v : 0);
      const long long s2 = s - v;
      if (s2 < -rd2 || s2 > remaining * max_coord) continue;
      cur[idx] = static_cast<int>(v);
      recurse(idx + 1, s2, rd2, acc * prefix[static_cast<size_t>(v + bank)]);
    }
  }
};

}  // namespace

ExactDistribution enumerate_stationary(int n_agents, long long money, long long bank,
                                       const RateFunction& f, long long max_configs) {
  if (n_agents < 1) throw std::invalid_argument("enumeration needs at least one agent");
  if (bank < 0) throw std::invalid_argument("debt capacity must be nonnegative");
  BigInt count = configuration_count(n_agents, money, bank);
  if (count > max_configs)
    throw TooLargeError("state space has " + count.str() +
                        " configurations, above the enumeration bound " +
                        std::to_string(max_configs));

  ExactDistribution dist;
  dist.n_agents = n_agents;
  dist.money = money;
  dist.bank = bank;
  dist.normalizer = 0;
  const long long reserve = count.convert_to<long long>();
  dist.configs.reserve(static_cast<size_t>(reserve));
  dist.weights.reserve(static_cast<size_t>(reserve));

  // Per-value theta factor, cumulative over j in [-bank, v].
  const long long max_coord = money + bank;
  std::vector<Rational> prefix(static_cast<size_t>(max_coord + bank + 1));
  Rational run = 1;
  for (long long v = -bank; v <= max_coord; ++v) {
    run /= rational_rate(f, static_cast<int>(v));
    prefix[static_cast<size_t>(v + bank)] = run;
  }

  Enumerator en{n_agents, static_cast<int>(max_coord), prefix, bank, dist, {}};
  en.cur.assign(static_cast<size_t>(n_agents), 0);
  en.recurse(0, money, bank, Rational(1));
  return dist;
}

Rational marginal(const ExactDistribution& dist, int n) {
  Rational num = 0;
  for (size_t i = 0; i < dist.configs.size(); ++i)
    if (dist.configs[i][0] == n) num += dist.weights[i];
  if (dist.normalizer == 0) throw std::domain_error("empty state space");
  return num / dist.normalizer;
}

Rational limiting_marginal(int n, long long n_agents, long long money, long long bank) {
  if (n_agents < 1) throw std::invalid_argument("marginal needs at least one agent");
  if (n < -bank || n > money + bank) return 0;
  BigInt den = varphi(n_agents, money, bank);
  if (den == 0) throw std::domain_error("no reachable configurations");
  BigInt num = n > 0 ? BigInt(n) * varphi(n_agents - 1, money - n, bank)
                     : varphi(n_agents - 1, money - n, bank + n);
  return Rational(num, den);
}

}  // namespace exlab
