#pragma once

#include <cstdint>
#include <vector>

#include "mml/chain.hpp"
#include "oracles.hpp"

namespace mml::testing {

inline oracle::Matrix to_rows(const TransitionMatrix& p) {
  oracle::Matrix rows(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) rows[x].assign(p.row(x).begin(), p.row(x).end());
  return rows;
}

inline TransitionMatrix uniform_iid2() {
  return TransitionMatrix::validate({{0.5, 0.5}, {0.5, 0.5}});
}

inline TransitionMatrix cycle3() {
  return TransitionMatrix::validate({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
}

inline ChainSpec random_chain(std::size_t m, std::uint64_t seed, double alpha = 1.0) {
  FamilyParams fp;
  fp.family = Family::RandomDense;
  fp.m = m;
  fp.alpha = alpha;
  fp.seed = seed;
  return generate(fp);
}

}  // namespace mml::testing
