#pragma once

#include <optional>

#include "exlab/distribution.hpp"
#include "exlab/rng.hpp"

namespace exlab {

/// Growth functional whose sign decides whether mean debt can shrink under
/// the first-phase dynamics:
///   sum_{n<=0} f(n) p_n * sum_{n>=0} p_n - sum_{n>=1} f(n) p_n * sum_{n<=-1} p_n.
/// Rates with this nonnegative on every unit-mass mean-mu distribution keep
/// the mean debt nondecreasing.
double debt_growth_form(const WealthDistribution& p, const RateFunction& f);

/// Random member of the unit-mass, mean-mu simplex with finite support:
/// exponential weights on [-W, W+2mu], normalized, then mass shifted between
/// the two extreme bins to pin the mean; redrawn if that would go negative.
WealthDistribution sample_mean_mu(int mu, Rng& rng, int half_width = 10);

struct ClassGReport {
  bool passed;
  long samples_checked;
  /// Most negative value of the growth form seen (may still be >= 0).
  double min_value;
  /// First violating distribution, when one was found. A pass is evidence
  /// over the sampled distributions, not a proof.
  std::optional<WealthDistribution> counterexample;
};

/// Randomized search for a violation of the debt-growth inequality.
/// Stops at the first value below -1e-12.
ClassGReport class_g_probe(const RateFunction& f, int mu, long num_samples,
                           std::uint64_t seed, int half_width = 10);

}  // namespace exlab
