#include <gtest/gtest.h>

#include "mml/error.hpp"
#include "mml/hitting.hpp"
#include "test_support.hpp"

using namespace mml;
using mml::testing::cycle3;
using mml::testing::to_rows;
using mml::testing::uniform_iid2;

TEST(HittingTable, UniformIid) {
  auto t = hitting_table(uniform_iid2(), StateSet::of({1}, 2));
  EXPECT_NEAR(t.h[0], 2.0, 1e-12);
  EXPECT_EQ(t.h[1], 0.0);
  EXPECT_NEAR(t.t_plus_all, 2.0, 1e-12);
  EXPECT_NEAR(oracle::survival_sum(to_rows(uniform_iid2()), {1}, 0), 2.0, 1e-9);
}

TEST(HittingTable, FullTargetIsZero) {
  auto p = mml::testing::random_chain(5, 2).matrix;
  auto t = hitting_table(p, StateSet::all(5));
  for (double v : t.h) EXPECT_EQ(v, 0.0);
}

TEST(HittingTable, DeterministicCycle) {
  auto t = hitting_table(cycle3(), StateSet::of({2}, 3));
  EXPECT_NEAR(t.h[0], 2.0, 1e-12);
  EXPECT_NEAR(t.h[1], 1.0, 1e-12);
  EXPECT_EQ(t.h[2], 0.0);
  EXPECT_LE(t.residual, 1e-9);
}

TEST(HittingTable, Errors) {
  EXPECT_THROW(hitting_table(uniform_iid2(), StateSet{}), Error);
  // Absorbing state 0 never reaches state 1.
  auto reducible = TransitionMatrix::validate({{1, 0}, {0.5, 0.5}});
  try {
    hitting_table(reducible, StateSet::of({1}, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularSystem);
  }
}

TEST(HittingTable, IidGeometricLaw) {
  FamilyParams f;
  f.family = Family::Iid;
  f.mu = {0.1, 0.2, 0.3, 0.4};
  auto p = generate(f).matrix;
  for (std::size_t j = 0; j < 4; ++j) {
    auto t = hitting_table(p, StateSet::of({j}, 4));
    for (std::size_t x = 0; x < 4; ++x)
      if (x != j) {
        EXPECT_NEAR(t.h[x], 1.0 / f.mu[j], 1e-12);
      }
  }
}

TEST(HittingTable, MatchesSurvivalSumOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t m = 2 + seed % 7;
    auto p = mml::testing::random_chain(m, seed, 0.7).matrix;
    std::vector<std::size_t> target{seed % m};
    if (m > 3) target.push_back((seed + 2) % m);
    auto t = hitting_table(p, StateSet::of(target, m));
    const auto rows = to_rows(p);
    for (std::size_t x = 0; x < m; ++x) {
      const double ref = oracle::survival_sum(rows, target, x);
      EXPECT_NEAR(t.h[x], ref, 1e-6 * std::max(1.0, ref));
    }
  }
}

TEST(HittingTable, MonotoneInTarget) {
  auto p = mml::testing::random_chain(7, 4).matrix;
  auto small = hitting_table(p, StateSet::of({1}, 7));
  auto large = hitting_table(p, StateSet::of({1, 4, 5}, 7));
  for (std::size_t x = 0; x < 7; ++x) EXPECT_LE(large.h[x], small.h[x] + 1e-12);
}

TEST(TPlusMinus, Examples) {
  auto u = uniform_iid2();
  EXPECT_NEAR(t_plus(u, StateSet::of({0}, 2), StateSet::of({1}, 2)), 2.0, 1e-12);
  EXPECT_NEAR(t_minus(u, StateSet::of({0}, 2), StateSet::of({1}, 2)), 2.0, 1e-12);
  EXPECT_EQ(t_plus(u, StateSet::of({1}, 2), StateSet::of({0, 1}, 2)), 0.0);

  auto c = cycle3();
  EXPECT_NEAR(t_plus(c, StateSet::of({0, 1}, 3), StateSet::of({2}, 3)), 2.0, 1e-12);
  EXPECT_NEAR(t_minus(c, StateSet::of({0, 1}, 3), StateSet::of({2}, 3)), 1.0, 1e-12);
  EXPECT_THROW(t_plus(c, StateSet{}, StateSet::of({2}, 3)), Error);
}

TEST(FirstEntry, ReconcilesWithSurvivalOracle) {
  auto p = mml::testing::random_chain(5, 8).matrix;
  const auto rows = to_rows(p);
  std::vector<double> start{0.1, 0.3, 0.2, 0.25, 0.15};
  auto b = StateSet::of({3}, 5);
  double oracle_mean = 0.0;
  for (std::size_t t = 0; t < 5000; ++t)
    oracle_mean += oracle::first_entry_survival(rows, start, {3}, t);
  EXPECT_NEAR(expected_first_entry_time(p, start, b), oracle_mean, 1e-8);
  // A start inside B enters at step 1.
  EXPECT_NEAR(expected_first_entry_time(p, point_mass(3, 5), b), 1.0, 1e-15);
}

TEST(TLarge, UniformIid) {
  auto u = uniform_iid2();
  auto r = t_large(u, std::vector<double>{0.5, 0.5}, 0.5);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  EXPECT_EQ(r.argmax_set, StateSet::of({0}, 2));
  EXPECT_FALSE(r.heuristic);
}

TEST(TLarge, OnlyFullSpaceQualifies) {
  auto p = mml::testing::random_chain(4, 1).matrix;
  auto pi = stationary(p).pi;
  auto r = t_large(p, pi, 1.0);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.argmax_set, StateSet::all(4));
}

TEST(TLarge, DeterministicCycleHalf) {
  // Every 2-subset of the 3-cycle is entered one step after leaving it.
  auto c = cycle3();
  std::vector<double> pi(3, 1.0 / 3.0);
  auto r = t_large(c, pi, 0.5);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_NEAR(oracle::t_large(to_rows(c), pi, 0.5), 1.0, 1e-9);
  EXPECT_EQ(r.argmax_set, StateSet::of({0, 1}, 3));
  EXPECT_GE(r.argmax_set.mass(pi), 0.5);
}

TEST(TLarge, MatchesRecursiveOracle) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::size_t m = 2 + seed % 4;
    auto p = mml::testing::random_chain(m, 100 + seed, 0.5).matrix;
    auto pi = stationary(p).pi;
    for (double eps : {0.2, 0.5, 0.8}) {
      auto r = t_large(p, pi, eps);
      const double ref = oracle::t_large(to_rows(p), pi, eps);
      EXPECT_NEAR(r.value, ref, 1e-6 * std::max(1.0, ref));
      EXPECT_GE(r.argmax_set.mass(pi), eps - kMassFilterSlack);
      EXPECT_NEAR(hitting_table(p, r.argmax_set).t_plus_all, r.value, 1e-12);
    }
  }
}

TEST(TLarge, Errors) {
  auto p = mml::testing::random_chain(21, 1).matrix;
  std::vector<double> pi(21, 1.0 / 21);
  try {
    t_large(p, pi, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooManyStates);
  }
  EXPECT_THROW(t_large(uniform_iid2(), std::vector<double>{0.5, 0.5}, 0.0), Error);
  EXPECT_THROW(t_large(uniform_iid2(), std::vector<double>{0.5, 0.5}, 1.5), Error);
}

TEST(TLargeUpper, DelegatesForSmallChains) {
  auto p = mml::testing::random_chain(6, 3).matrix;
  auto pi = stationary(p).pi;
  auto a = t_large(p, pi, 0.5);
  auto b = t_large_upper(p, pi, 0.5);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.argmax_set, b.argmax_set);
  EXPECT_FALSE(b.heuristic);

  auto one = TransitionMatrix::validate({{1.0}});
  EXPECT_EQ(t_large_upper(one, std::vector<double>{1.0}, 0.5).value, 0.0);
}

TEST(TLargeUpper, HeuristicOnIidRespectsGeometricCeiling) {
  const std::size_t m = 30;
  FamilyParams f;
  f.family = Family::Iid;
  for (std::size_t i = 0; i < m; ++i) f.mu.push_back(static_cast<double>(i + 1));
  const double total = static_cast<double>(m * (m + 1) / 2);
  for (auto& v : f.mu) v /= total;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) s += f.mu[i];
  f.mu.back() = 1.0 - s;
  auto p = generate(f).matrix;
  for (double eps : {0.1, 0.5}) {
    auto r = t_large_upper(p, f.mu, eps);
    EXPECT_TRUE(r.heuristic);
    EXPECT_GE(r.argmax_set.mass(f.mu), eps - kMassFilterSlack);
    // Every qualifying B has T(B) = 1 / pi(B) <= 1 / eps.
    EXPECT_LE(r.value, 1.0 / eps + 1e-9);
    EXPECT_NEAR(r.value, 1.0 / r.argmax_set.mass(f.mu), 1e-9);
  }
}

TEST(Lemma1, Examples) {
  auto iid = check_lemma1(uniform_iid2(), std::vector<double>{0.5, 0.5}, StateSet::of({0}, 2),
                          StateSet::of({1}, 2));
  EXPECT_TRUE(iid.holds);
  EXPECT_FALSE(iid.vacuous);
  EXPECT_NEAR(iid.value, 0.5, 1e-15);
  EXPECT_NEAR(iid.bound, 0.5, 1e-12);

  std::vector<double> third(3, 1.0 / 3.0);
  auto cyc = check_lemma1(cycle3(), third, StateSet::of({0}, 3), StateSet::of({1}, 3));
  EXPECT_TRUE(cyc.holds);
  EXPECT_NEAR(cyc.bound, 1.0 / 3.0, 1e-12);
  EXPECT_EQ(cyc.param("t_plus_AB"), "1");
  EXPECT_EQ(cyc.param("t_minus_BA"), "2");

  auto same = check_lemma1(cycle3(), third, StateSet::of({0}, 3), StateSet::of({0}, 3));
  EXPECT_TRUE(same.vacuous);
  EXPECT_THROW(check_lemma1(cycle3(), third, StateSet{}, StateSet::of({0}, 3)), Error);
}

TEST(Lemma2, Examples) {
  auto iid = check_lemma2(uniform_iid2(), std::vector<double>{0.5, 0.5}, StateSet::of({0}, 2));
  EXPECT_TRUE(iid.holds);
  EXPECT_NEAR(iid.value, 2.0, 1e-12);
  EXPECT_NEAR(iid.bound, 8.0, 1e-12);

  auto full = check_lemma2(uniform_iid2(), std::vector<double>{0.5, 0.5}, StateSet::all(2));
  EXPECT_TRUE(full.holds);
  EXPECT_EQ(full.value, 0.0);

  std::vector<double> third(3, 1.0 / 3.0);
  auto cyc = check_lemma2(cycle3(), third, StateSet::of({0}, 3));
  EXPECT_TRUE(cyc.holds);
  EXPECT_NEAR(cyc.value, 2.0, 1e-12);
  EXPECT_NEAR(cyc.bound, 6.0, 1e-12);
}
