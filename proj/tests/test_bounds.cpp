#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mml/bounds.hpp"
#include "mml/error.hpp"
#include "test_support.hpp"

using namespace mml;

namespace {

BoundParams params(double c, double t, std::size_t n, std::vector<double> pi) {
  BoundParams p;
  p.c = c;
  p.t_half = t;
  p.n = n;
  p.pi = std::move(pi);
  return p;
}

}  // namespace

TEST(QProbabilities, DirectEvaluation) {
  auto q = q_probabilities(params(1, 1, 10, {0.1, 0.9}));
  EXPECT_NEAR(q[0], 0.36787944117144233, 1e-15);
  auto q2 = q_probabilities(params(1, 2, 20, {0.5, 0.5}));
  EXPECT_NEAR(q2[0], 0.006737946999085467, 1e-17);
  EXPECT_THROW(q_probabilities(params(1, 1, 0, {1.0})), Error);
  EXPECT_THROW(q_probabilities(params(0, 1, 3, {1.0})), Error);
}

TEST(QProbabilities, IidMode) {
  auto p = params(1, 1, 3, {0.25, 0.75});
  p.iid_mode = true;
  auto q = q_probabilities(p);
  EXPECT_NEAR(q[0], std::pow(0.75, 3), 1e-15);
  EXPECT_NEAR(q[1], std::pow(0.25, 3), 1e-15);
}

TEST(JointSurvivalBound, Examples) {
  auto p = params(1, 1, 3, {0.5, 0.5});
  EXPECT_NEAR(joint_survival_bound(p, StateSet::of({0, 1}, 2)), 0.049787068367863944, 1e-16);
  EXPECT_NEAR(joint_survival_bound(p, StateSet::of({1}, 2)), q_probabilities(p)[1], 1e-16);
  EXPECT_THROW(joint_survival_bound(p, StateSet{}), Error);
}

TEST(JointSurvivalBound, ProductIdentity) {
  auto chain = mml::testing::random_chain(8, 5);
  auto pi = stationary(chain.matrix).pi;
  auto p = params(kDefaultC, 3.7, 40, pi);
  auto q = q_probabilities(p);
  for (std::uint64_t mask = 1; mask < 256; ++mask) {
    auto j = StateSet::from_mask(mask, 8);
    double product = 1.0;
    for (auto x : j.members()) product *= q[x];
    const double direct = joint_survival_bound(p, j);
    EXPECT_NEAR(product, direct, 1e-15 * direct * 8) << j.to_string();
  }
}

TEST(IidExactSurvival, Examples) {
  std::vector<double> pi{0.5, 0.25, 0.25};
  EXPECT_EQ(iid_exact_survival(pi, StateSet::of({0}, 3), 3), 0.125);
  EXPECT_EQ(iid_exact_survival(pi, StateSet::all(3), 1), 0.0);
  EXPECT_EQ(iid_exact_survival(pi, StateSet::of({1}, 3), 2), 0.5625);
}

TEST(ProductInequality, Examples) {
  auto r = product_inequality_check(std::vector<double>{0.5, 0.5}, StateSet::all(2));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.bound, 0.25);

  auto single = product_inequality_check(std::vector<double>{0.3, 0.7}, StateSet::of({0}, 2));
  EXPECT_EQ(single.value, single.bound);

  std::vector<double> tenth(10, 0.1);
  auto ten = product_inequality_check(tenth, StateSet::all(10));
  EXPECT_TRUE(ten.holds);
  EXPECT_NEAR(ten.bound, 0.3486784401, 1e-12);
  EXPECT_NEAR(ten.value, 0.0, 1e-15);
}

TEST(ProductInequality, ExhaustiveSmallChains) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::size_t m = 1 + seed;
    auto pi = m == 1 ? std::vector<double>{1.0}
                     : stationary(mml::testing::random_chain(m, seed).matrix).pi;
    for (std::uint64_t mask = 1; mask < (1u << m); ++mask) {
      auto j = StateSet::from_mask(mask, m);
      double product = 1.0;
      for (auto x : j.members()) product *= iid_exact_survival(pi, StateSet::of({x}, m), 7);
      EXPECT_LE(iid_exact_survival(pi, j, 7), product + 1e-15);
      EXPECT_TRUE(product_inequality_check(pi, j).holds);
    }
  }
}

TEST(HittingTailBound, Examples) {
  EXPECT_NEAR(hitting_tail_bound(2.0, 20), 0.049787068367863944, 1e-16);
  EXPECT_LE(std::pow(0.5, 20), hitting_tail_bound(2.0, 20));
  EXPECT_EQ(hitting_tail_bound(2.0, 5), 1.0);
  EXPECT_NEAR(hitting_tail_bound(1.0, 11), 0.049787068367863944, 1e-16);
  EXPECT_THROW(hitting_tail_bound(0.0, 3), Error);
}

TEST(HittingTailBound, Monotone) {
  for (double e : {0.5, 1.0, 2.3, 7.9}) {
    double prev = 2.0;
    for (std::uint64_t t = 0; t < 200; ++t) {
      const double b = hitting_tail_bound(e, t);
      EXPECT_LE(b, prev);
      EXPECT_LE(b, hitting_tail_bound(e + 1.0, t));
      prev = b;
    }
  }
}

TEST(ExplicitHittingTail, Examples) {
  const double e = std::numbers::e;
  const auto t = static_cast<std::uint64_t>(std::llround(16 * e));
  // 16e is not an integer; compare against the formula at the rounded t.
  EXPECT_NEAR(explicit_hitting_tail(0.5, 2.0, t, 1 / (2 * e)),
              std::exp(-static_cast<double>(t) * 0.5 / (4 * e)), 1e-15);
  EXPECT_EQ(explicit_hitting_tail(0.5, 2.0, 0), 1.0);
  const double iid = explicit_hitting_tail(0.5, 2.0, 40);
  EXPECT_NEAR(iid, 0.15891318918096103, 1e-15);
  EXPECT_LE(std::pow(0.5, 40), iid);
}

TEST(MissingMassTail, Examples) {
  auto p = params(1, 1, 4, {0.25, 0.25, 0.25, 0.25});
  auto t = missing_mass_tail_bound(p, 0.1);
  EXPECT_NEAR(t.mean_term, 0.36787944117144233, 1e-15);
  EXPECT_NEAR(t.threshold, t.mean_term + 0.1, 1e-15);
  EXPECT_GT(missing_mass_tail_bound(p, 0.1).failure_bound,
            missing_mass_tail_bound(p, 5.0).failure_bound);
  EXPECT_LT(missing_mass_tail_bound(p, 50.0).failure_bound, 1e-300);

  auto iid = params(1, 1, 6, {0.1, 0.2, 0.3, 0.4});
  iid.iid_mode = true;
  EXPECT_NEAR(missing_mass_tail_bound(iid, 0.1).mean_term,
              oracle::iid_missing_mass_mean(iid.pi, 6), 1e-15);
}

TEST(BernoulliMgf, MatchesDirectProduct) {
  auto p = params(kDefaultC, 2.0, 16, {0.1, 0.2, 0.3, 0.4});
  auto q = q_probabilities(p);
  for (double s : {0.5, 1.0, 2.0}) {
    double eq3 = 1.0, cor1 = 1.0;
    for (std::size_t j = 0; j < 4; ++j) {
      eq3 *= 1.0 - q[j] + q[j] * std::exp(s * 16 * p.pi[j]);
      cor1 *= 1.0 - q[j] + q[j] * std::exp(s * p.pi[j]);
    }
    EXPECT_NEAR(bernoulli_product_mgf(p, MgfForm::Eq3, s), eq3, 1e-12 * eq3);
    EXPECT_NEAR(bernoulli_product_mgf(p, MgfForm::Cor1, s), cor1, 1e-14);
  }
  EXPECT_NEAR(bernoulli_product_mgf(p, MgfForm::Eq3, 0.0), 1.0, 1e-15);
}

TEST(Kl, Examples) {
  EXPECT_EQ(kl_divergence(0.3, 0.3), 0.0);
  EXPECT_TRUE(pinsker_check(0.3, 0.3).holds);
  EXPECT_NEAR(kl_divergence(0.5, 0.25), 0.14384103622589046, 1e-15);
  EXPECT_TRUE(pinsker_check(0.5, 0.25).holds);
  EXPECT_NEAR(kl_divergence(0.9, 0.1), 1.7577796618689755, 1e-14);
  EXPECT_TRUE(pinsker_check(0.9, 0.1).holds);
  EXPECT_THROW(kl_divergence(0.0, 0.5), Error);
  EXPECT_THROW(kl_divergence(0.5, 1.0), Error);
}

TEST(Kl, PinskerGrid) {
  for (int i = 0; i < 100; ++i) {
    for (int k = 0; k < 100; ++k) {
      const double p = 0.01 + 0.98 * i / 99.0;
      const double q = 0.01 + 0.98 * k / 99.0;
      const double d = kl_divergence(p, q);
      EXPECT_GE(d, 0.0);
      if (i == k) {
        EXPECT_NEAR(d, 0.0, 1e-12);
      }
      ASSERT_TRUE(pinsker_check(p, q).holds) << p << " " << q;
    }
  }
}

TEST(Calibration, UniformIidTwoState) {
  std::vector<ChainSpec> suite{ChainSpec{mml::testing::uniform_iid2(), std::nullopt, "iid2"}};
  CalibrationOptions opt;
  opt.n_grid = {1, 2, 4, 8};
  opt.trials = 20'000;
  opt.master_seed = 3;
  auto cal = calibrate_c(suite, opt);
  EXPECT_GE(cal.c, 1.0);
  // Every instance is certified at the reported c.
  for (const auto& inst : cal.instances) EXPECT_GE(inst.tight_c, cal.c);
  EXPECT_EQ(std::fmod(cal.c * 100.0 + 1e-9, 1.0) < 1e-6, true);
}

TEST(Calibration, Errors) {
  EXPECT_THROW(calibrate_c(std::vector<ChainSpec>{}, CalibrationOptions{}), Error);
  CalibrationInstance inst;
  inst.n = 4;
  inst.pi_j = 0.5;
  inst.t_half = 2.0;
  inst.tail = make_tail("none", 0, 100);
  try {
    certify_c({inst}, 0.01);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientTrials);
  }
}

TEST(Calibration, SureSurvivalForcesZero) {
  // A survival probability of one admits no positive c.
  EXPECT_EQ(tight_c(make_tail("x", 10, 10), 1, 1.0 / 3.0, 1.0), 0.0);
}
