#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace mml {

inline constexpr double kInequalityTolerance = 1e-9;

/// One inequality check: `value` is the exact or empirical left-hand side,
/// `bound` the right-hand side.
struct BoundReport {
  std::string name;
  std::string chain_id;
  std::vector<std::pair<std::string, std::string>> params;
  double bound = 0.0;
  double value = 0.0;
  /// CI half-width granted as slack (0 for exact checks).
  double ci = 0.0;
  double tolerance = kInequalityTolerance;
  bool holds = true;
  bool vacuous = false;

  double margin() const { return bound - value; }
  /// Recomputes `holds` as value <= bound + tolerance + ci.
  void evaluate();
  BoundReport& with(std::string key, std::string val);
  BoundReport& with(std::string key, double val);
  /// Value of a params key, or empty.
  std::string param(const std::string& key) const;
  bool is_violation() const { return !holds && !vacuous; }
};

/// Stable textual form used in every report: up to 12 significant digits.
std::string format_number(double v);

std::string csv_escape(const std::string& field);

extern const char* const kReportCsvHeader;

std::string to_csv_row(const BoundReport& report);

/// Writes `#`-prefixed metadata lines, the header and one row per report.
void write_report_csv(std::ostream& out, const std::vector<BoundReport>& reports,
                      const std::vector<std::pair<std::string, std::string>>& metadata);

}  // namespace mml
