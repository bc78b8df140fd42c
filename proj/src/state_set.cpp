#include "mml/state_set.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "mml/error.hpp"

namespace mml {

StateSet StateSet::of(std::vector<std::size_t> indices, std::size_t m) {
  std::sort(indices.begin(), indices.end());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= m)
      throw Error(ErrorKind::BadParams, "state index " + std::to_string(indices[i]) +
                                            " out of range for m=" + std::to_string(m));
    if (i > 0 && indices[i] == indices[i - 1])
      throw Error(ErrorKind::BadParams, "repeated state index " + std::to_string(indices[i]));
  }
  StateSet s;
  s.members_ = std::move(indices);
  return s;
}

StateSet StateSet::all(std::size_t m) {
  StateSet s;
  s.members_.resize(m);
  std::iota(s.members_.begin(), s.members_.end(), std::size_t{0});
  return s;
}

StateSet StateSet::from_mask(std::uint64_t mask, std::size_t m) {
  StateSet s;
  for (std::size_t i = 0; i < m && i < 64; ++i)
    if (mask >> i & 1u) s.members_.push_back(i);
  return s;
}

bool StateSet::contains(std::size_t x) const {
  return std::binary_search(members_.begin(), members_.end(), x);
}

std::vector<char> StateSet::indicator(std::size_t m) const {
  std::vector<char> out(m, 0);
  for (auto x : members_) out[x] = 1;
  return out;
}

std::uint64_t StateSet::mask() const {
  std::uint64_t out = 0;
  for (auto x : members_) out |= std::uint64_t{1} << x;
  return out;
}

double StateSet::mass(std::span<const double> pi) const {
  double acc = 0.0;
  for (auto x : members_) acc += pi[x];
  return acc;
}

bool StateSet::intersects(const StateSet& other) const {
  auto a = members_.begin();
  auto b = other.members_.begin();
  while (a != members_.end() && b != other.members_.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a; else ++b;
  }
  return false;
}

bool StateSet::is_subset_of(const StateSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

std::string StateSet::to_string(char sep) const {
  std::string out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(members_[i]);
  }
  return out;
}

}  // namespace mml
