#pragma once

#include <Eigen/Dense>
#include <utility>

#include "exlab/rate_function.hpp"

namespace exlab {

/// Numerical slack below zero tolerated in probability entries (RK4 steps
/// can undershoot by roundoff).
inline constexpr double kEpsPos = 1e-12;
/// Default bound on boundary entries for a distribution to count as
/// well-truncated on its window.
inline constexpr double kTailTol = 1e-10;

/// Probability mass function over an integer wealth window
/// [window_min, window_max] with window_min <= 0 <= window_max, stored
/// densely (index 0 of the array holds p_{window_min}).
class WealthDistribution {
 public:
  WealthDistribution(int window_min, int window_max)
      : min_(window_min),
        max_(window_max),
        probs_(Eigen::ArrayXd::Zero(check_window(window_min, window_max))) {}

  WealthDistribution(int window_min, Eigen::ArrayXd probs)
      : min_(window_min), max_(window_min + static_cast<int>(probs.size()) - 1),
        probs_(std::move(probs)) {
    check_window(min_, max_);
  }

  /// Point mass at n on the given window.
  static WealthDistribution delta(int n, int window_min, int window_max);

  int window_min() const { return min_; }
  int window_max() const { return max_; }
  int size() const { return static_cast<int>(probs_.size()); }
  /// Array index of wealth value 0.
  int zero_index() const { return -min_; }

  /// p_n; zero outside the window.
  double prob(int n) const {
    return (n < min_ || n > max_) ? 0.0 : probs_[n - min_];
  }
  void set(int n, double v) { probs_[n - min_] = v; }

  const Eigen::ArrayXd& values() const { return probs_; }
  Eigen::ArrayXd& values() { return probs_; }

 private:
  static int check_window(int lo, int hi);

  int min_, max_;
  Eigen::ArrayXd probs_;
};

struct Moments {
  double mass;
  double mean;
};

/// Total mass and first moment.
Moments moments(const WealthDistribution& p);

/// Mean debt per agent: -sum_{n<=-1} n p_n.
double debt_level(const WealthDistribution& p);

/// Mean giving rate sum_n f(n) p_n over the window.
double mean_rate(const WealthDistribution& p, const RateFunction& f);

enum class Metric { l2, tv };

/// Distance on the union of the two windows; entries outside a window are 0.
/// l2 is the Euclidean norm of the difference, tv is half the l1 norm.
double distance(const WealthDistribution& p, const WealthDistribution& q, Metric metric);

/// Most negative entry (0 for an all-nonnegative distribution is fine too;
/// callers compare against -kEpsPos).
double min_entry(const WealthDistribution& p);

/// Larger of the two boundary entries, in absolute value.
double boundary_mass(const WealthDistribution& p);

/// Both boundary entries below tol.
bool well_truncated(const WealthDistribution& p, double tol = kTailTol);

/// f(n) for every n in the window, as an array aligned with p.values().
Eigen::ArrayXd rate_values_on_window(const RateFunction& f, int window_min, int window_max);

}  // namespace exlab
