#pragma once

#include <stdexcept>
#include <string>

namespace exlab {

/// Rate function cannot be used by the requested engine (no finite
/// acceptance bound, or no exact rational value).
struct UnsupportedRateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Explicit initial allocation breaks the per-run wealth accounting.
struct InvalidAllocationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Enumeration request exceeds the configuration-count guard.
struct TooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mean debt never reached the switching threshold before t_max.
struct Phase1TimeoutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integration produced entries more negative than the allowed slack.
struct InstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bank-vacancy probability is undefined for this distribution.
struct DegenerateDistributionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// No admissible root of the quartic produced a valid solution.
struct NoEquilibriumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// More than one admissible root; refusing to pick silently.
struct AmbiguousEquilibriumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The equilibrium ansatz does not sum to a probability mass function.
struct NonNormalizableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A data file failed to parse; message carries the line number.
struct CsvParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace exlab
