#pragma once

#include <string>
#include <utility>
#include <vector>

#include "exlab/distribution.hpp"
#include "exlab/exact_markov.hpp"

namespace exlab {

/// Shortest decimal that round-trips the double (to_chars).
std::string format_double(double v);

/// Header `n,probability`, one row per window entry, sorted by n, LF endings.
void write_histogram_csv(const std::string& path, const WealthDistribution& p);

/// Inverse of write_histogram_csv. Accepts sparse/unsorted rows; missing
/// values inside the window read as 0. Throws CsvParseError with the
/// offending line number.
WealthDistribution read_histogram_csv(const std::string& path);

/// Header `n,p_num,p_den,p_decimal`; the rational columns are exact.
void write_exact_csv(const std::string& path,
                     const std::vector<std::pair<int, Rational>>& rows);

/// Long format `t,n,probability`, one block per snapshot.
void write_trajectory_csv(const std::string& path, const std::vector<double>& times,
                          const std::vector<WealthDistribution>& snapshots);

struct SummaryRow {
  double t;
  double l2_to_equilibrium;
  double debt;
  double mass_defect;
};

/// Header `t,l2_to_equilibrium,debt,mass_defect`.
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);

}  // namespace exlab
