#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mml/chain.hpp"
#include "mml/report.hpp"
#include "mml/state_set.hpp"

namespace mml {

inline constexpr std::size_t kMaxEnumerationStates = 20;
/// Slack on the pi(B) >= epsilon filter so that sets of nominal mass epsilon
/// are not lost to summation rounding.
inline constexpr double kMassFilterSlack = 1e-12;

/// Expected steps h(x) to reach `target` from x, with h = 0 on the target.
struct HittingTimeTable {
  StateSet target;
  std::vector<double> h;
  /// max_x h(x), i.e. T(target).
  double t_plus_all = 0.0;
  /// max over x outside the target of |h(x) - 1 - sum_y P(x,y) h(y)|.
  double residual = 0.0;
};

/// Solves the first-step system (I - P restricted to the complement) h = 1.
/// Throws EmptySet for an empty target and SingularSystem when the target is
/// unreachable from some state.
HittingTimeTable hitting_table(const TransitionMatrix& p, const StateSet& target);

/// max_{x in A} h_B(x).
double t_plus(const TransitionMatrix& p, const StateSet& a, const StateSet& b);
/// min_{x in A} h_B(x).
double t_minus(const TransitionMatrix& p, const StateSet& a, const StateSet& b);

/// Expected first-entry time E N_B where N_B = min{i >= 1 : X_i in B} and
/// X_1 ~ start. Equals 1 + sum_x start(x) h_B(x).
double expected_first_entry_time(const TransitionMatrix& p, std::span<const double> start,
                                 const StateSet& target);

struct LargeSetTime {
  double epsilon = 0.0;
  double value = 0.0;
  StateSet argmax_set;
  /// True when `value` is the best of a heuristic candidate family rather
  /// than the exact maximum.
  bool heuristic = false;
  std::size_t sets_examined = 0;
};

/// Exact T(epsilon) = max over non-empty B with pi(B) >= epsilon of T(B), by
/// exhaustive enumeration. Ties go to the lexicographically smallest member
/// list. Throws TooManyStates for m > 20 and DomainError for epsilon outside (0, 1].
LargeSetTime t_large(const TransitionMatrix& p, std::span<const double> pi, double epsilon);

/// Equals t_large for m <= 20. For larger chains returns the maximum of T(B)
/// over a heuristic candidate family (heaviest-first and lightest-first pi
/// prefixes, hitting-time balls and index arcs around up to eight anchors),
/// which can underestimate T(epsilon).
LargeSetTime t_large_upper(const TransitionMatrix& p, std::span<const double> pi,
                           double epsilon);

/// pi(A) <= T+(A,B) / (T+(A,B) + T-(B,A)) and pi(A) T-(B,A) <= T+(A,B).
/// Overlapping A and B yield a vacuous report.
BoundReport check_lemma1(const TransitionMatrix& p, std::span<const double> pi,
                         const StateSet& a, const StateSet& b);

/// T(A) <= 2 T(0.5) / pi(A), with T(0.5) computed exactly (m <= 20).
BoundReport check_lemma2(const TransitionMatrix& p, std::span<const double> pi,
                         const StateSet& a);
/// Same check with a precomputed T(0.5).
BoundReport check_lemma2(const TransitionMatrix& p, std::span<const double> pi,
                         const StateSet& a, double t_half);

}  // namespace mml
