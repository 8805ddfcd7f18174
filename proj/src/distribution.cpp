#include "exlab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace exlab {

int WealthDistribution::check_window(int lo, int hi) {
  if (lo > 0 || hi < 0)
    throw std::invalid_argument("wealth window [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "] must contain 0");
  return hi - lo + 1;
}

WealthDistribution WealthDistribution::delta(int n, int window_min, int window_max) {
  WealthDistribution p(window_min, window_max);
  if (n < window_min || n > window_max)
    throw std::invalid_argument("delta location outside window");
  p.set(n, 1.0);
  return p;
}

Moments moments(const WealthDistribution& p) {
  const Eigen::ArrayXd& v = p.values();
  const Eigen::ArrayXd n =
      Eigen::ArrayXd::LinSpaced(v.size(), p.window_min(), p.window_max());
  return {v.sum(), (n * v).sum()};
}

double debt_level(const WealthDistribution& p) {
  const int z = p.zero_index();
  if (z == 0) return 0.0;
  const Eigen::ArrayXd neg = p.values().head(z);
  const Eigen::ArrayXd n = Eigen::ArrayXd::LinSpaced(z, p.window_min(), -1);
  return -(n * neg).sum();
}

double mean_rate(const WealthDistribution& p, const RateFunction& f) {
  const Eigen::ArrayXd fv = rate_values_on_window(f, p.window_min(), p.window_max());
  return (fv * p.values()).sum();
}

double distance(const WealthDistribution& p, const WealthDistribution& q, Metric metric) {
  const int lo = std::min(p.window_min(), q.window_min());
  const int hi = std::max(p.window_max(), q.window_max());
  double sq = 0.0, l1 = 0.0;
  for (int n = lo; n <= hi; ++n) {
    const double d = p.prob(n) - q.prob(n);
    sq += d * d;
    l1 += std::abs(d);
  }
  return metric == Metric::l2 ? std::sqrt(sq) : 0.5 * l1;
}

double min_entry(const WealthDistribution& p) { return p.values().minCoeff(); }

double boundary_mass(const WealthDistribution& p) {
  return std::max(std::abs(p.values()[0]), std::abs(p.values()[p.size() - 1]));
}

bool well_truncated(const WealthDistribution& p, double tol) {
  return boundary_mass(p) < tol;
}

Eigen::ArrayXd rate_values_on_window(const RateFunction& f, int window_min, int window_max) {
  Eigen::ArrayXd fv(window_max - window_min + 1);
  for (int n = window_min; n <= window_max; ++n) fv[n - window_min] = f(n);
  return fv;
}

}  // namespace exlab
