#include "exlab/class_g.hpp"

#include <stdexcept>

namespace exlab {

double debt_growth_form(const WealthDistribution& p, const RateFunction& f) {
  const Eigen::ArrayXd& v = p.values();
  const Eigen::ArrayXd fv = rate_values_on_window(f, p.window_min(), p.window_max());
  const int z = p.zero_index();
  const int w = p.size();

  const double f_nonpos = (fv.head(z + 1) * v.head(z + 1)).sum();  // n <= 0
  const double mass_nonneg = v.tail(w - z).sum();                  // n >= 0
  const double f_pos = (fv.tail(w - z - 1) * v.tail(w - z - 1)).sum();  // n >= 1
  const double mass_neg = v.head(z).sum();                              // n <= -1

  return f_nonpos * mass_nonneg - f_pos * mass_neg;
}

WealthDistribution sample_mean_mu(int mu, Rng& rng, int half_width) {
  if (mu < 1) throw std::invalid_argument("mu must be >= 1");
  const int lo = -half_width;
  const int hi = half_width + 2 * mu;
  const int w = hi - lo + 1;

  for (;;) {
    Eigen::ArrayXd v(w);
    for (int i = 0; i < w; ++i) v[i] = rng.exponential();
    v /= v.sum();

    const Eigen::ArrayXd n = Eigen::ArrayXd::LinSpaced(w, lo, hi);
    const double mean = (n * v).sum();
    // Moving delta from the bottom bin to the top bin shifts the mean by
    // delta*(hi - lo) while preserving mass.
    const double delta = (mu - mean) / (hi - lo);
    if (v[0] - delta < 0.0 || v[w - 1] + delta < 0.0) continue;
    v[0] -= delta;
    v[w - 1] += delta;
    return WealthDistribution(lo, std::move(v));
  }
}

ClassGReport class_g_probe(const RateFunction& f, int mu, long num_samples,
                           std::uint64_t seed, int half_width) {
  if (num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
  Rng rng(seed);
  ClassGReport report{true, 0, 0.0, std::nullopt};
  for (long k = 0; k < num_samples; ++k) {
    WealthDistribution p = sample_mean_mu(mu, rng, half_width);
    const double value = debt_growth_form(p, f);
    ++report.samples_checked;
    if (value < report.min_value) report.min_value = value;
    if (value < -1e-12) {
      report.passed = false;
      report.counterexample = std::move(p);
      return report;
    }
  }
  return report;
}

}  // namespace exlab
