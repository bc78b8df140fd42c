#include "mml/chain_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mml/error.hpp"

namespace mml {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& source, const std::string& field,
                               const std::string& msg) {
  throw Error(ErrorKind::Parse, source + ": field '" + field + "': " + msg);
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::vector<double> number_array(const json& node, const std::string& source,
                                 const std::string& field) {
  if (!node.is_array()) schema_error(source, field, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number())
      schema_error(source, field + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(node[i].get<double>());
  }
  return out;
}

}  // namespace

ChainSpec parse_chain_json(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse,
                source + ": " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  if (!doc.is_object()) schema_error(source, "<root>", "expected a JSON object");

  if (!doc.contains("m")) schema_error(source, "m", "missing");
  if (!doc["m"].is_number_integer() || doc["m"].get<long long>() < 1)
    schema_error(source, "m", "expected an integer >= 1");
  const auto m = static_cast<std::size_t>(doc["m"].get<long long>());

  if (!doc.contains("P")) schema_error(source, "P", "missing");
  const json& p = doc["P"];
  if (!p.is_array()) schema_error(source, "P", "expected an array of rows");
  if (p.size() != m)
    schema_error(source, "P", "has " + std::to_string(p.size()) + " rows, m is " +
                                  std::to_string(m));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < m; ++i) {
    const std::string field = "P[" + std::to_string(i) + "]";
    rows.push_back(number_array(p[i], source, field));
    if (rows.back().size() != m)
      schema_error(source, field, "has " + std::to_string(rows.back().size()) +
                                      " entries, m is " + std::to_string(m));
  }

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const json& l = doc["labels"];
    if (!l.is_array() || l.size() != m)
      schema_error(source, "labels", "expected an array of " + std::to_string(m) + " strings");
    for (std::size_t i = 0; i < m; ++i) {
      if (!l[i].is_string())
        schema_error(source, "labels[" + std::to_string(i) + "]", "expected a string");
      labels.push_back(l[i].get<std::string>());
    }
  }

  ChainSpec chain{TransitionMatrix::validate(rows, std::move(labels)), std::nullopt, source};
  if (doc.contains("start") && !doc["start"].is_null()) {
    auto start = number_array(doc["start"], source, "start");
    try {
      validate_start(start, m);
    } catch (const Error& e) {
      schema_error(source, "start", e.what());
    }
    chain.start = std::move(start);
  }
  return chain;
}

ChainSpec read_chain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_chain_json(buf.str(), path);
}

std::string to_chain_json(const ChainSpec& chain) {
  const auto& p = chain.matrix;
  json doc;
  doc["m"] = p.size();
  json rows = json::array();
  for (std::size_t x = 0; x < p.size(); ++x) {
    auto r = p.row(x);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  doc["P"] = std::move(rows);
  if (!p.labels().empty()) doc["labels"] = p.labels();
  if (chain.start) doc["start"] = *chain.start;
  return doc.dump(2) + "\n";
}

void write_chain_file(const ChainSpec& chain, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Parse, path + ": cannot open for writing");
  out << to_chain_json(chain);
}

}  // namespace mml
