#include "output.hpp"

#include <fstream>
#include <iostream>

#include "mml/error.hpp"

namespace mml::cli {

namespace {

std::string cell(const nlohmann::json& v) {
  if (v.is_string()) return csv_escape(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) return format_number(v.get<double>());
  return csv_escape(v.dump());
}

}  // namespace

Table report_table(const std::vector<BoundReport>& reports) {
  Table t;
  t.columns = {"name", "chain_id", "params", "bound", "value", "ci", "margin", "holds", "vacuous"};
  for (const auto& r : reports) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    t.add({r.name, r.chain_id, params, r.bound, r.value, r.ci, r.margin(), r.holds, r.vacuous});
  }
  return t;
}

void write_table(std::ostream& out, const Table& table, const Metadata& meta, Format format) {
  if (format == Format::Json) {
    nlohmann::json doc;
    doc["meta"] = nlohmann::json::object();
    for (const auto& [k, v] : meta) doc["meta"][k] = v;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t i = 0; i < table.columns.size(); ++i) obj[table.columns[i]] = row[i];
      doc["rows"].push_back(std::move(obj));
    }
    out << doc.dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : meta) out << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell(row[i]);
    out << "\n";
  }
}

void write_reports(std::ostream& out, const std::vector<BoundReport>& reports,
                   const Metadata& meta, Format format) {
  if (format == Format::Csv)
    write_report_csv(out, reports, meta);
  else
    write_table(out, report_table(reports), meta, format);
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << std::flush;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Parse, path + ": cannot open for writing");
  file << content;
  if (!file) throw Error(ErrorKind::Parse, path + ": write failed");
}

}  // namespace mml::cli
