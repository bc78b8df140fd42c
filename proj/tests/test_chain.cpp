#include <gtest/gtest.h>

#include <numeric>

#include "mml/chain.hpp"
#include "mml/chain_io.hpp"
#include "mml/error.hpp"
#include "test_support.hpp"

using namespace mml;
using mml::testing::cycle3;
using mml::testing::uniform_iid2;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an mml::Error";
  return ErrorKind::Parse;
}

}  // namespace

TEST(Validate, AcceptsUniformAndSingleState) {
  EXPECT_EQ(uniform_iid2().size(), 2u);
  auto one = TransitionMatrix::validate({{1.0}});
  EXPECT_EQ(one.size(), 1u);
}

TEST(Validate, RejectsBadMatrices) {
  EXPECT_EQ(kind_of([] { TransitionMatrix::validate({{0.6, 0.5}, {0.5, 0.5}}); }),
            ErrorKind::NonStochasticRow);
  EXPECT_EQ(kind_of([] { TransitionMatrix::validate({{1.2, -0.2}, {0.5, 0.5}}); }),
            ErrorKind::NegativeEntry);
  EXPECT_EQ(kind_of([] { TransitionMatrix::validate({{0.5, 0.5}, {1.0}}); }),
            ErrorKind::NonSquare);
  EXPECT_EQ(kind_of([] { TransitionMatrix::validate({}); }), ErrorKind::NonSquare);
}

TEST(Validate, ErrorNamesTheRow) {
  try {
    TransitionMatrix::validate({{0.5, 0.5}, {0.6, 0.5}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
  }
}

TEST(Validate, ClampsRoundingNoise) {
  auto p = TransitionMatrix::validate({{-1e-16, 1.0 + 1e-16}, {0.5, 0.5}});
  EXPECT_EQ(p(0, 0), 0.0);
  EXPECT_EQ(p(0, 1), 1.0);
}

TEST(Irreducible, Examples) {
  EXPECT_TRUE(is_irreducible(uniform_iid2()));
  EXPECT_FALSE(is_irreducible(TransitionMatrix::validate({{1, 0}, {0.5, 0.5}})));
  EXPECT_TRUE(is_irreducible(cycle3()));
  EXPECT_TRUE(is_irreducible(TransitionMatrix::validate({{1.0}})));
}

TEST(Stationary, Examples) {
  auto u = stationary(uniform_iid2());
  EXPECT_NEAR(u.pi[0], 0.5, 1e-15);
  EXPECT_NEAR(u.pi[1], 0.5, 1e-15);

  // Detailed balance 0.1 pi0 = 0.2 pi1.
  auto two = stationary(TransitionMatrix::validate({{0.9, 0.1}, {0.2, 0.8}}));
  EXPECT_NEAR(two.pi[0], 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(two.pi[1], 1.0 / 3.0, 1e-14);

  auto cyc = stationary(cycle3());
  for (double v : cyc.pi) EXPECT_NEAR(v, 1.0 / 3.0, 1e-14);
  EXPECT_LE(cyc.residual, kStationaryResidualTolerance);
}

TEST(Stationary, RejectsReducible) {
  EXPECT_EQ(kind_of([] { stationary(TransitionMatrix::validate({{1, 0}, {0.5, 0.5}})); }),
            ErrorKind::NotIrreducible);
}

TEST(Stationary, ResidualIsRecomputed) {
  auto chain = mml::testing::random_chain(7, 11);
  auto st = stationary(chain.matrix);
  EXPECT_EQ(st.residual, stationary_residual(chain.matrix, st.pi));
  EXPECT_LE(st.residual, 1e-10);
}

TEST(Stationary, MatchesPowerOracleOnRandomChains) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto chain = mml::testing::random_chain(6, seed, 0.5);
    auto pi = stationary(chain.matrix).pi;
    auto ref = oracle::stationary_by_powers(mml::testing::to_rows(chain.matrix));
    for (std::size_t i = 0; i < pi.size(); ++i) EXPECT_NEAR(pi[i], ref[i], 1e-12);
  }
}

TEST(Stationary, PermutationEquivariant) {
  auto chain = mml::testing::random_chain(6, 3);
  auto pi = stationary(chain.matrix).pi;
  std::vector<std::size_t> perm{4, 2, 0, 5, 1, 3};
  auto pi_perm = stationary(chain.matrix.permuted(perm)).pi;
  for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_NEAR(pi_perm[i], pi[perm[i]], 1e-13);
}

TEST(Generate, FamiliesByConstruction) {
  FamilyParams iid;
  iid.family = Family::Iid;
  iid.mu = {0.5, 0.5};
  auto c = generate(iid);
  EXPECT_EQ(c.matrix(0, 0), 0.5);
  EXPECT_EQ(c.matrix(1, 1), 0.5);

  FamilyParams two;
  two.family = Family::TwoState;
  two.p = 0.1;
  two.q = 0.2;
  auto t = generate(two);
  EXPECT_DOUBLE_EQ(t.matrix(0, 0), 0.9);
  EXPECT_DOUBLE_EQ(t.matrix(0, 1), 0.1);
  EXPECT_DOUBLE_EQ(t.matrix(1, 0), 0.2);
  EXPECT_DOUBLE_EQ(t.matrix(1, 1), 0.8);

  FamilyParams lazy;
  lazy.family = Family::LazyCycle;
  lazy.m = 4;
  lazy.hold = 0.5;
  auto l = generate(lazy);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(l.matrix(i, i), 0.5);
    EXPECT_EQ(l.matrix(i, (i + 1) % 4), 0.25);
    EXPECT_EQ(l.matrix(i, (i + 3) % 4), 0.25);
    EXPECT_EQ(l.matrix(i, (i + 2) % 4), 0.0);
  }
}

TEST(Generate, EveryFamilyIsIrreducibleAndDeterministic) {
  std::vector<FamilyParams> all;
  FamilyParams f;
  f.family = Family::Iid;
  f.mu = {0.2, 0.3, 0.5};
  all.push_back(f);
  f = {};
  f.family = Family::LazyCycle;
  for (std::size_t m : {1, 2, 3, 7}) {
    f.m = m;
    f.hold = 0.3;
    all.push_back(f);
  }
  f = {};
  f.family = Family::BirthDeath;
  f.m = 8;
  f.p = 0.3;
  f.q = 0.4;
  all.push_back(f);
  f = {};
  f.family = Family::RandomDense;
  f.m = 9;
  f.alpha = 0.2;
  f.seed = 5;
  all.push_back(f);
  f = {};
  f.family = Family::TwoState;
  f.p = 1.0;
  f.q = 1.0;
  all.push_back(f);
  for (const auto& params : all) {
    auto a = generate(params);
    auto b = generate(params);
    EXPECT_TRUE(is_irreducible(a.matrix)) << describe(params);
    EXPECT_EQ(to_chain_json(a), to_chain_json(b));
  }
}

TEST(Generate, IidStationaryIsRow) {
  FamilyParams f;
  f.family = Family::Iid;
  f.mu = {0.1, 0.2, 0.3, 0.4};
  auto pi = stationary(generate(f).matrix).pi;
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(pi[i], f.mu[i], 1e-10);
}

TEST(Generate, BadParams) {
  FamilyParams f;
  f.family = Family::LazyCycle;
  f.m = 4;
  f.hold = 1.0;
  EXPECT_EQ(kind_of([&] { generate(f); }), ErrorKind::BadParams);
  f = {};
  f.family = Family::Iid;
  f.mu = {0.5, 0.6};
  EXPECT_EQ(kind_of([&] { generate(f); }), ErrorKind::BadParams);
  f.mu = {1.0, 0.0};
  EXPECT_EQ(kind_of([&] { generate(f); }), ErrorKind::BadParams);
  EXPECT_EQ(kind_of([] { parse_family("torus"); }), ErrorKind::BadParams);
}

TEST(ChainJson, RoundTripPreservesMatrixAndStart) {
  auto chain = mml::testing::random_chain(5, 9);
  chain.start = std::vector<double>{0.2, 0.2, 0.2, 0.2, 0.2};
  auto back = parse_chain_json(to_chain_json(chain));
  for (std::size_t x = 0; x < 5; ++x)
    for (std::size_t y = 0; y < 5; ++y) EXPECT_EQ(back.matrix(x, y), chain.matrix(x, y));
  ASSERT_TRUE(back.start.has_value());
  EXPECT_EQ(*back.start, *chain.start);
}

TEST(ChainJson, AbsentStartMeansStationary) {
  auto chain = parse_chain_json(R"({"m": 2, "P": [[0.9, 0.1], [0.2, 0.8]]})");
  EXPECT_FALSE(chain.start.has_value());
  auto law = initial_law(chain);
  EXPECT_NEAR(law[0], 2.0 / 3.0, 1e-14);
}

TEST(ChainJson, ErrorsAreLocated) {
  try {
    parse_chain_json("{\"m\": 2,\n \"P\": [[0.5, 0.5],\n [0.5 0.5]]}", "x.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  try {
    parse_chain_json(R"({"m": 2, "P": [[0.5, 0.5], [0.5, "a"]]})", "x.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("P[1][1]"), std::string::npos) << e.what();
  }
  try {
    parse_chain_json(R"({"m": 2, "P": [[0.5, 0.5], [0.5, 0.5]], "start": [0.7, 0.7]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("start"), std::string::npos) << e.what();
  }
  EXPECT_EQ(kind_of([] { parse_chain_json(R"({"m": 2, "P": [[0.6, 0.5], [0.5, 0.5]]})"); }),
            ErrorKind::NonStochasticRow);
  EXPECT_EQ(kind_of([] { parse_chain_json(R"({"P": [[1]]})"); }), ErrorKind::Parse);
}
