#include "mml/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mml/chain_io.hpp"
#include "mml/error.hpp"

namespace mml {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& source, const std::string& field,
                              const std::string& msg) {
  throw Error(ErrorKind::Parse, source + ": field '" + field + "': " + msg);
}

std::size_t as_size(const json& node, const std::string& source, const std::string& field) {
  if (!node.is_number_integer() || node.get<long long>() < 0)
    field_error(source, field, "expected a non-negative integer");
  return static_cast<std::size_t>(node.get<long long>());
}

double as_double(const json& node, const std::string& source, const std::string& field) {
  if (!node.is_number()) field_error(source, field, "expected a number");
  return node.get<double>();
}

FamilyParams family_from_json(const json& node, const std::string& source,
                              const std::string& field) {
  if (!node.contains("family") || !node["family"].is_string())
    field_error(source, field + ".family", "expected a family name");
  FamilyParams fp;
  try {
    fp.family = parse_family(node["family"].get<std::string>());
  } catch (const Error& e) {
    field_error(source, field + ".family", e.what());
  }
  for (const auto& [key, value] : node.items()) {
    const std::string path = field + "." + key;
    if (key == "family") continue;
    if (key == "m") {
      fp.m = as_size(value, source, path);
    } else if (key == "mu") {
      if (!value.is_array()) field_error(source, path, "expected an array of numbers");
      for (std::size_t i = 0; i < value.size(); ++i)
        fp.mu.push_back(as_double(value[i], source, path + "[" + std::to_string(i) + "]"));
    } else if (key == "hold") {
      fp.hold = as_double(value, source, path);
    } else if (key == "p") {
      fp.p = as_double(value, source, path);
    } else if (key == "q") {
      fp.q = as_double(value, source, path);
    } else if (key == "alpha") {
      fp.alpha = as_double(value, source, path);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) field_error(source, path, "expected an unsigned integer");
      fp.seed = value.get<std::uint64_t>();
    } else {
      field_error(source, path, "unknown key");
    }
  }
  return fp;
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, source + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::size_t to_size(const std::string& token, const std::string& whole) {
  std::size_t v = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (token.empty() || ec != std::errc() || ptr != end)
    throw Error(ErrorKind::Parse, "bad integer '" + token + "' in '" + whole + "'");
  return v;
}

}  // namespace

void ExperimentConfig::apply(VerifyOptions& options) const {
  if (!chains.empty()) options.chains = chains;
  if (!sets.empty()) options.sets = sets;
  if (n_grid) {
    options.n_grid = *n_grid;
    options.iid_n = *n_grid;
  }
  if (trials) options.trials = *trials;
  if (master_seed) options.seed = *master_seed;
  if (c) options.c = *c;
  if (c2) options.c2 = *c2;
  if (epsilon) options.epsilon = *epsilon;
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source,
                                         const std::string& base_dir) {
  const json doc = parse_json(text, source);
  if (!doc.is_object()) field_error(source, "<root>", "expected a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "chains") {
      if (!value.is_array()) field_error(source, key, "expected an array");
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string path = key + "[" + std::to_string(i) + "]";
        if (value[i].is_string()) {
          std::filesystem::path file(value[i].get<std::string>());
          if (file.is_relative()) file = std::filesystem::path(base_dir) / file;
          cfg.chains.push_back(read_chain_file(file.string()));
        } else if (value[i].is_object()) {
          const auto fp = family_from_json(value[i], source, path);
          cfg.chains.push_back(generate(fp));
        } else {
          field_error(source, path, "expected a path or a generator descriptor");
        }
      }
    } else if (key == "sets") {
      if (!value.is_array()) field_error(source, key, "expected an array of index lists");
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string path = key + "[" + std::to_string(i) + "]";
        if (!value[i].is_array()) field_error(source, path, "expected an index list");
        std::vector<std::size_t> set;
        for (std::size_t k = 0; k < value[i].size(); ++k)
          set.push_back(as_size(value[i][k], source, path + "[" + std::to_string(k) + "]"));
        cfg.sets.push_back(std::move(set));
      }
    } else if (key == "n_grid") {
      if (value.is_string()) {
        cfg.n_grid = parse_size_grid(value.get<std::string>());
      } else if (value.is_array()) {
        std::vector<std::size_t> grid;
        for (std::size_t i = 0; i < value.size(); ++i)
          grid.push_back(as_size(value[i], source, key + "[" + std::to_string(i) + "]"));
        cfg.n_grid = std::move(grid);
      } else {
        field_error(source, key, "expected an array or a range string");
      }
    } else if (key == "trials") {
      cfg.trials = as_size(value, source, key);
    } else if (key == "master_seed") {
      if (!value.is_number_unsigned()) field_error(source, key, "expected an unsigned integer");
      cfg.master_seed = value.get<std::uint64_t>();
    } else if (key == "constants") {
      if (!value.is_object()) field_error(source, key, "expected an object");
      for (const auto& [name, v] : value.items()) {
        const std::string path = key + "." + name;
        if (name == "c")
          cfg.c = as_double(v, source, path);
        else if (name == "c2")
          cfg.c2 = as_double(v, source, path);
        else if (name == "epsilon")
          cfg.epsilon = as_double(v, source, path);
        else
          field_error(source, path, "unknown constant");
      }
    } else if (key == "output_dir") {
      if (!value.is_string()) field_error(source, key, "expected a string");
      cfg.output_dir = value.get<std::string>();
    } else {
      field_error(source, key, "unknown key");
    }
  }
  return cfg;
}

ExperimentConfig read_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_experiment_config(buf.str(), path, parent.empty() ? "." : parent.string());
}

FamilyParams parse_family_descriptor(const std::string& json_text) {
  const json doc = parse_json(json_text, "<descriptor>");
  if (!doc.is_object()) field_error("<descriptor>", "<root>", "expected a JSON object");
  return family_from_json(doc, "<descriptor>", "descriptor");
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  if (text.empty()) return out;  // callers reject empty sets with EmptySet
  for (const auto& token : split(text, ',')) out.push_back(to_size(token, text));
  return out;
}

std::vector<std::size_t> parse_size_grid(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& token : split(text, ',')) {
    const auto dots = token.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_size(token, text));
      continue;
    }
    const auto lo = to_size(token.substr(0, dots), text);
    const auto hi = to_size(token.substr(dots + 2), text);
    if (lo > hi) throw Error(ErrorKind::Parse, "empty range '" + token + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::Parse, "empty grid");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& token : split(text, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (token.empty() || used != token.size())
      throw Error(ErrorKind::Parse, "bad number '" + token + "' in '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::Parse, "empty number list");
  return out;
}

}  // namespace mml
