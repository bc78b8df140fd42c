#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mml/chain.hpp"
#include "mml/verify.hpp"

namespace mml {

/// Parsed experiment file. Only keys present in the file override defaults.
struct ExperimentConfig {
  std::vector<ChainSpec> chains;
  std::vector<std::vector<std::size_t>> sets;
  std::optional<std::vector<std::size_t>> n_grid;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> master_seed;
  std::optional<double> c;
  std::optional<double> c2;
  std::optional<double> epsilon;
  std::string output_dir;

  /// Copies every configured field into `options`.
  void apply(VerifyOptions& options) const;
};

/// `source` names the file in messages; relative chain paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source,
                                         const std::string& base_dir = ".");
ExperimentConfig read_experiment_config(const std::string& path);

/// Generator descriptor, e.g. {"family": "lazy-cycle", "m": 5, "hold": 0.5}.
FamilyParams parse_family_descriptor(const std::string& json_text);

// Argument plumbing shared by the CLI.

/// "0,2,5" -> {0, 2, 5}; "" -> {}.
std::vector<std::size_t> parse_index_list(const std::string& text);
/// Comma list whose items may be inclusive ranges "a..b".
std::vector<std::size_t> parse_size_grid(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace mml
