#include "exlab/rate_function.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "exlab/errors.hpp"

namespace exlab {

RateFunction RateFunction::constant() { return RateFunction(Kind::constant); }

RateFunction RateFunction::star() { return RateFunction(Kind::star); }

RateFunction RateFunction::abs_variant() { return RateFunction(Kind::abs_variant); }

RateFunction RateFunction::exponential(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exponential rate needs alpha > 0");
  RateFunction f(Kind::exponential);
  f.alpha_ = alpha;
  return f;
}

RateFunction RateFunction::table(std::map<int, double> values, double fallback) {
  if (!(fallback > 0.0)) throw std::invalid_argument("table rate fallback must be positive");
  for (const auto& [n, v] : values) {
    if (!(v > 0.0))
      throw std::invalid_argument("table rate value at n=" + std::to_string(n) +
                                  " must be positive");
  }
  RateFunction f(Kind::table);
  f.table_ = std::move(values);
  f.fallback_ = fallback;
  return f;
}

RateFunction RateFunction::from_name(const std::string& name) {
  if (name == "const" || name == "constant") return constant();
  if (name == "fstar") return star();
  if (name == "fabs") return abs_variant();
  throw std::invalid_argument("unknown rate function name: " + name);
}

double RateFunction::operator()(int n) const {
  switch (kind_) {
    case Kind::constant:
      return 1.0;
    case Kind::star:
      return n <= 1 ? 1.0 : static_cast<double>(n - 1) / n;
    case Kind::abs_variant: {
      const int a = std::abs(n);
      return a <= 1 ? 1.0 : static_cast<double>(a - 1) / a;
    }
    case Kind::exponential:
      return std::exp(-alpha_ * n);
    case Kind::table: {
      auto it = table_.find(n);
      return it != table_.end() ? it->second : fallback_;
    }
  }
  return 1.0;  // unreachable
}

std::string RateFunction::name() const {
  switch (kind_) {
    case Kind::constant:
      return "const";
    case Kind::star:
      return "fstar";
    case Kind::abs_variant:
      return "fabs";
    case Kind::exponential:
      return "exp(alpha=" + std::to_string(alpha_) + ")";
    case Kind::table:
      return "table";
  }
  return "?";
}

double RateFunction::upper_bound() const {
  switch (kind_) {
    case Kind::constant:
    case Kind::star:
    case Kind::abs_variant:
      return 1.0;
    case Kind::table: {
      double m = fallback_;
      for (const auto& [n, v] : table_) m = std::max(m, v);
      return m;
    }
    case Kind::exponential:
      throw UnsupportedRateError("exponential rate is unbounded on negative wealth");
  }
  return 1.0;  // unreachable
}

}  // namespace exlab
