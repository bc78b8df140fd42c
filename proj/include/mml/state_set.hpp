#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mml {

/// Sorted set of distinct state indices in [0, m).
class StateSet {
 public:
  StateSet() = default;

  /// Sorts `indices`; throws BadParams on an out-of-range or repeated index.
  static StateSet of(std::vector<std::size_t> indices, std::size_t m);
  static StateSet all(std::size_t m);
  /// States whose bit is set in `mask` (m <= 64).
  static StateSet from_mask(std::uint64_t mask, std::size_t m);

  std::span<const std::size_t> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(std::size_t x) const;
  /// Indicator vector of length m.
  std::vector<char> indicator(std::size_t m) const;
  std::uint64_t mask() const;

  /// pi(set) = sum of pi over members.
  double mass(std::span<const double> pi) const;

  bool intersects(const StateSet& other) const;
  bool is_subset_of(const StateSet& other) const;

  /// "0|3|5" style rendering; `sep` selects the separator.
  std::string to_string(char sep = ',') const;

  friend bool operator==(const StateSet&, const StateSet&) = default;
  /// Lexicographic order of the member lists.
  friend bool operator<(const StateSet& a, const StateSet& b) { return a.members_ < b.members_; }

 private:
  std::vector<std::size_t> members_;
};

}  // namespace mml
