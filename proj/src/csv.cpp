#include "exlab/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include "exlab/errors.hpp"

namespace exlab {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;  // 64 bytes always suffice for a double
  return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

[[noreturn]] void parse_fail(const std::string& path, size_t line, const std::string& what) {
  throw CsvParseError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void write_histogram_csv(const std::string& path, const WealthDistribution& p) {
  std::ofstream out = open_out(path);
  out << "n,probability\n";
  for (int n = p.window_min(); n <= p.window_max(); ++n)
    out << n << ',' << format_double(p.prob(n)) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

WealthDistribution read_histogram_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvParseError(path + ": cannot open");
  std::string line;
  size_t lineno = 0;
  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,probability")
    parse_fail(path, lineno, "expected header 'n,probability', got '" + line + "'");

  std::map<int, double> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos) parse_fail(path, lineno, "missing comma");
    int n = 0;
    const char* begin = line.data();
    auto [p1, e1] = std::from_chars(begin, begin + comma, n);
    if (e1 != std::errc() || p1 != begin + comma)
      parse_fail(path, lineno, "bad integer '" + line.substr(0, comma) + "'");
    const char* vbegin = begin + comma + 1;
    const char* vend = begin + line.size();
    double prob = 0;
    auto [p2, e2] = std::from_chars(vbegin, vend, prob);
    if (e2 != std::errc() || p2 != vend || vbegin == vend)
      parse_fail(path, lineno, "bad probability '" + line.substr(comma + 1) + "'");
    if (!rows.emplace(n, prob).second)
      parse_fail(path, lineno, "duplicate n=" + std::to_string(n));
  }
  if (rows.empty()) parse_fail(path, lineno, "no data rows");

  const int lo = std::min(0, rows.begin()->first);
  const int hi = std::max(0, rows.rbegin()->first);
  WealthDistribution p(lo, hi);
  for (const auto& [n, prob] : rows) p.set(n, prob);
  return p;
}

void write_exact_csv(const std::string& path,
                     const std::vector<std::pair<int, Rational>>& rows) {
  std::ofstream out = open_out(path);
  out << "n,p_num,p_den,p_decimal\n";
  for (const auto& [n, q] : rows)
    out << n << ',' << boost::multiprecision::numerator(q).str() << ','
        << boost::multiprecision::denominator(q).str() << ','
        << format_double(q.convert_to<double>()) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_trajectory_csv(const std::string& path, const std::vector<double>& times,
                          const std::vector<WealthDistribution>& snapshots) {
  std::ofstream out = open_out(path);
  out << "t,n,probability\n";
  for (size_t i = 0; i < times.size(); ++i) {
    const WealthDistribution& p = snapshots[i];
    for (int n = p.window_min(); n <= p.window_max(); ++n)
      out << format_double(times[i]) << ',' << n << ',' << format_double(p.prob(n))
          << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out = open_out(path);
  out << "t,l2_to_equilibrium,debt,mass_defect\n";
  for (const SummaryRow& r : rows)
    out << format_double(r.t) << ',' << format_double(r.l2_to_equilibrium) << ','
        << format_double(r.debt) << ',' << format_double(r.mass_defect) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace exlab
