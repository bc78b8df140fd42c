#include "mml/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace mml {

const char* const kReportCsvHeader = "name,chain_id,params,bound,value,ci,margin,holds,vacuous";

void BoundReport::evaluate() { holds = value <= bound + tolerance + ci; }

BoundReport& BoundReport::with(std::string key, std::string val) {
  params.emplace_back(std::move(key), std::move(val));
  return *this;
}

BoundReport& BoundReport::with(std::string key, double val) {
  return with(std::move(key), format_number(val));
}

std::string BoundReport::param(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  return {};
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv_row(const BoundReport& r) {
  std::string params;
  for (std::size_t i = 0; i < r.params.size(); ++i) {
    if (i) params += ';';
    params += r.params[i].first + "=" + r.params[i].second;
  }
  return csv_escape(r.name) + "," + csv_escape(r.chain_id) + "," + csv_escape(params) + "," +
         format_number(r.bound) + "," + format_number(r.value) + "," + format_number(r.ci) +
         "," + format_number(r.margin()) + "," + (r.holds ? "true" : "false") + "," +
         (r.vacuous ? "true" : "false");
}

void write_report_csv(std::ostream& out, const std::vector<BoundReport>& reports,
                      const std::vector<std::pair<std::string, std::string>>& metadata) {
  for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << "\n";
  out << kReportCsvHeader << "\n";
  for (const auto& r : reports) out << to_csv_row(r) << "\n";
}

}  // namespace mml
