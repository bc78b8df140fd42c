#pragma once

#include <string>

#include "mml/chain.hpp"

namespace mml {

/// Parses a chain-spec document {"m", "P", "labels"?, "start"?}.
/// Syntax errors report line and column; schema errors name the field path.
/// Throws Error(Parse) for malformed documents and the validation kinds of
/// TransitionMatrix::validate for well-formed but invalid matrices.
ChainSpec parse_chain_json(const std::string& text, const std::string& source = "<input>");

ChainSpec read_chain_file(const std::string& path);

/// Serializes with shortest round-trip decimal representations.
std::string to_chain_json(const ChainSpec& chain);

void write_chain_file(const ChainSpec& chain, const std::string& path);

}  // namespace mml
