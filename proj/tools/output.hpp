#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mml/report.hpp"

namespace mml::cli {

enum class Format { Csv, Json };

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Rows of JSON scalars rendered either as CSV or as a JSON document.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  void add(std::vector<nlohmann::json> row) { rows.push_back(std::move(row)); }
};

Table report_table(const std::vector<BoundReport>& reports);

void write_table(std::ostream& out, const Table& table, const Metadata& meta, Format format);
void write_reports(std::ostream& out, const std::vector<BoundReport>& reports,
                   const Metadata& meta, Format format);

/// Writes to `path`, or to stdout when it is empty. Nothing is left behind on error
/// because callers render into a buffer first.
void emit(const std::string& path, const std::string& content);

}  // namespace mml::cli
