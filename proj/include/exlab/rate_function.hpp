#pragma once

#include <map>
#include <string>

namespace exlab {

/// Giver-selection rate f: Z -> (0, inf). An agent holding n dollars is
/// picked to give at a rate proportional to f(n).
///
/// Shipped kinds:
///   constant     f(n) = 1
///   star         f(n) = 1 for n <= 1, (n-1)/n for n >= 2
///   abs_variant  f(n) = 1 for |n| <= 1, (|n|-1)/|n| otherwise
///   exponential  f(n) = exp(-alpha n), alpha > 0
///   table        explicit values with a fallback for unlisted integers
class RateFunction {
 public:
  enum class Kind { constant, star, abs_variant, exponential, table };

  static RateFunction constant();
  static RateFunction star();
  static RateFunction abs_variant();
  static RateFunction exponential(double alpha);
  /// Throws std::invalid_argument if any value (or the fallback) is <= 0.
  static RateFunction table(std::map<int, double> values, double fallback = 1.0);

  /// Parse a CLI/manifest name: "const", "fstar", "fabs".
  static RateFunction from_name(const std::string& name);

  double operator()(int n) const;

  Kind kind() const { return kind_; }
  /// Name used in manifests and CLI flags.
  std::string name() const;

  /// True when sup_Z f is finite (everything except exponential).
  bool bounded() const { return kind_ != Kind::exponential; }
  /// Least upper bound of f over all integers; throws UnsupportedRateError
  /// for the exponential kind.
  double upper_bound() const;

  double alpha() const { return alpha_; }
  const std::map<int, double>& table_values() const { return table_; }
  double table_fallback() const { return fallback_; }

 private:
  RateFunction(Kind kind) : kind_(kind) {}

  Kind kind_;
  double alpha_ = 0.0;
  std::map<int, double> table_;
  double fallback_ = 1.0;
};

}  // namespace exlab
