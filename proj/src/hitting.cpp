#include "mml/hitting.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <cmath>
#include <numeric>

#include "mml/error.hpp"

namespace mml {

namespace {

void require_nonempty(const StateSet& s, const char* what) {
  if (s.empty()) throw Error(ErrorKind::EmptySet, std::string(what) + " is empty");
}

void check_range(const StateSet& s, std::size_t m) {
  if (!s.empty() && s.members().back() >= m)
    throw Error(ErrorKind::BadParams, "state set " + s.to_string() + " out of range for m=" +
                                          std::to_string(m));
}

// h over all states for the target given as an indicator; nullopt if singular.
std::optional<std::vector<double>> solve_hitting(const TransitionMatrix& p,
                                                 const std::vector<char>& in_target) {
  const std::size_t m = p.size();
  std::vector<std::size_t> outside;
  std::vector<std::size_t> position(m, 0);
  for (std::size_t x = 0; x < m; ++x) {
    if (!in_target[x]) {
      position[x] = outside.size();
      outside.push_back(x);
    }
  }
  std::vector<double> h(m, 0.0);
  if (outside.empty()) return h;

  const std::size_t k = outside.size();
  DenseMatrix a(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    auto prow = p.row(outside[i]);
    for (std::size_t j = 0; j < k; ++j) a(i, j) = -prow[outside[j]];
    a(i, i) += 1.0;
  }
  auto solved = solve_linear(std::move(a), std::vector<double>(k, 1.0));
  if (!solved) return std::nullopt;
  for (std::size_t i = 0; i < k; ++i) h[outside[i]] = (*solved)[i];
  return h;
}

double first_step_residual(const TransitionMatrix& p, const std::vector<char>& in_target,
                           const std::vector<double>& h) {
  const std::size_t m = p.size();
  double worst = 0.0;
  for (std::size_t x = 0; x < m; ++x) {
    if (in_target[x]) continue;
    auto r = p.row(x);
    double acc = 1.0;
    for (std::size_t y = 0; y < m; ++y) acc += r[y] * h[y];
    worst = std::max(worst, std::abs(h[x] - acc));
  }
  return worst;
}

bool better(double value, const StateSet& set, double best, const StateSet& best_set) {
  return value > best || (value == best && set < best_set);
}

// Appends states in `order` until the accumulated mass reaches epsilon.
StateSet prefix_reaching(const std::vector<std::size_t>& order, std::span<const double> pi,
                         double epsilon, std::size_t m) {
  std::vector<std::size_t> members;
  double mass = 0.0;
  for (auto x : order) {
    members.push_back(x);
    mass += pi[x];
    if (mass >= epsilon - kMassFilterSlack) break;
  }
  return StateSet::of(std::move(members), m);
}

}  // namespace

HittingTimeTable hitting_table(const TransitionMatrix& p, const StateSet& target) {
  require_nonempty(target, "target set");
  check_range(target, p.size());
  const auto in_target = target.indicator(p.size());
  auto h = solve_hitting(p, in_target);
  if (!h)
    throw Error(ErrorKind::SingularSystem,
                "hitting system for target {" + target.to_string() + "} is singular");
  HittingTimeTable out;
  out.target = target;
  out.h = std::move(*h);
  out.t_plus_all = *std::max_element(out.h.begin(), out.h.end());
  out.residual = first_step_residual(p, in_target, out.h);
  return out;
}

double t_plus(const TransitionMatrix& p, const StateSet& a, const StateSet& b) {
  require_nonempty(a, "start set A");
  auto table = hitting_table(p, b);
  double best = 0.0;
  for (auto x : a.members()) best = std::max(best, table.h[x]);
  return best;
}

double t_minus(const TransitionMatrix& p, const StateSet& a, const StateSet& b) {
  require_nonempty(a, "start set A");
  auto table = hitting_table(p, b);
  double best = table.h[a.members().front()];
  for (auto x : a.members()) best = std::min(best, table.h[x]);
  return best;
}

double expected_first_entry_time(const TransitionMatrix& p, std::span<const double> start,
                                 const StateSet& target) {
  validate_start(start, p.size());
  auto table = hitting_table(p, target);
  double acc = 1.0;
  for (std::size_t x = 0; x < p.size(); ++x) acc += start[x] * table.h[x];
  return acc;
}

LargeSetTime t_large(const TransitionMatrix& p, std::span<const double> pi, double epsilon) {
  const std::size_t m = p.size();
  if (m > kMaxEnumerationStates)
    throw Error(ErrorKind::TooManyStates,
                "exact T(epsilon) enumerates subsets and needs m <= 20, got m=" +
                    std::to_string(m));
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw Error(ErrorKind::DomainError, "epsilon must lie in (0, 1]");

  const std::uint64_t count = std::uint64_t{1} << m;
  std::vector<double> mass(count, 0.0);
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    mass[mask] = mass[mask & (mask - 1)] + pi[low];
  }

  LargeSetTime out;
  out.epsilon = epsilon;
  out.value = -1.0;
  std::vector<char> in_target(m);
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    if (mass[mask] < epsilon - kMassFilterSlack) continue;
    for (std::size_t x = 0; x < m; ++x) in_target[x] = static_cast<char>(mask >> x & 1u);
    auto h = solve_hitting(p, in_target);
    if (!h)
      throw Error(ErrorKind::SingularSystem, "hitting system singular during enumeration");
    ++out.sets_examined;
    const double value = *std::max_element(h->begin(), h->end());
    auto set = StateSet::from_mask(mask, m);
    if (better(value, set, out.value, out.argmax_set)) {
      out.value = value;
      out.argmax_set = std::move(set);
    }
  }
  return out;
}

LargeSetTime t_large_upper(const TransitionMatrix& p, std::span<const double> pi,
                           double epsilon) {
  const std::size_t m = p.size();
  if (m <= kMaxEnumerationStates) return t_large(p, pi, epsilon);
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw Error(ErrorKind::DomainError, "epsilon must lie in (0, 1]");

  std::vector<StateSet> candidates;
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pi[a] > pi[b]; });
  candidates.push_back(prefix_reaching(order, pi, epsilon, m));
  std::reverse(order.begin(), order.end());
  candidates.push_back(prefix_reaching(order, pi, epsilon, m));

  const std::size_t anchors = std::min<std::size_t>(m, 8);
  for (std::size_t k = 0; k < anchors; ++k) {
    const std::size_t anchor = k * m / anchors;
    auto ball = hitting_table(p, StateSet::of({anchor}, m));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ball.h[a] < ball.h[b]; });
    candidates.push_back(prefix_reaching(order, pi, epsilon, m));
    for (std::size_t i = 0; i < m; ++i) order[i] = (anchor + i) % m;
    candidates.push_back(prefix_reaching(order, pi, epsilon, m));
  }

  LargeSetTime out;
  out.epsilon = epsilon;
  out.value = -1.0;
  out.heuristic = true;
  for (auto& set : candidates) {
    const double value = hitting_table(p, set).t_plus_all;
    ++out.sets_examined;
    if (better(value, set, out.value, out.argmax_set)) {
      out.value = value;
      out.argmax_set = std::move(set);
    }
  }
  return out;
}

BoundReport check_lemma1(const TransitionMatrix& p, std::span<const double> pi,
                         const StateSet& a, const StateSet& b) {
  require_nonempty(a, "set A");
  require_nonempty(b, "set B");
  const double tp = t_plus(p, a, b);
  const double tm = t_minus(p, b, a);
  const double pi_a = a.mass(pi);

  BoundReport r;
  r.name = "lemma1";
  r.value = pi_a;
  r.bound = tp + tm > 0.0 ? tp / (tp + tm) : 1.0;
  r.vacuous = a.intersects(b);
  r.with("A", a.to_string('|')).with("B", b.to_string('|'));
  r.with("t_plus_AB", tp).with("t_minus_BA", tm);

  const double product_lhs = pi_a * tm;
  const bool product_holds = product_lhs <= tp + r.tolerance;
  r.with("product_lhs", product_lhs).with("product_holds", product_holds ? "true" : "false");
  r.evaluate();
  r.holds = r.holds && product_holds;
  return r;
}

BoundReport check_lemma2(const TransitionMatrix& p, std::span<const double> pi,
                         const StateSet& a) {
  require_nonempty(a, "set A");
  return check_lemma2(p, pi, a, t_large(p, pi, 0.5).value);
}

BoundReport check_lemma2(const TransitionMatrix& p, std::span<const double> pi,
                         const StateSet& a, double t_half) {
  require_nonempty(a, "set A");
  const double pi_a = a.mass(pi);
  const double t_a = hitting_table(p, a).t_plus_all;

  BoundReport r;
  r.name = "lemma2";
  r.value = t_a;
  r.bound = 2.0 * t_half / pi_a;
  r.with("A", a.to_string('|')).with("pi_A", pi_a).with("T_half", t_half);
  // Smallest constant C with T(A) <= C T(0.5) / pi(A) on this instance.
  if (t_half > 0.0) r.with("min_constant", t_a * pi_a / t_half);
  r.evaluate();
  return r;
}

}  // namespace mml
