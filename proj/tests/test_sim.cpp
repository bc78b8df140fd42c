#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "mml/error.hpp"
#include "mml/sim.hpp"
#include "test_support.hpp"

using namespace mml;
using mml::testing::cycle3;
using mml::testing::uniform_iid2;

namespace {

ChainSpec iid2() { return ChainSpec{uniform_iid2(), std::nullopt, "iid2"}; }
ChainSpec cycle_from0() { return ChainSpec{cycle3(), point_mass(0, 3), "cycle3"}; }

SimConfig config(ChainSpec chain, std::size_t n, std::size_t trials, std::uint64_t seed = 7,
                 std::size_t workers = 1) {
  return SimConfig{std::move(chain), n, trials, seed, workers};
}

}  // namespace

TEST(Trajectory, DeterministicCycle) {
  auto path = sample_trajectory(cycle_from0(), 4, 123);
  EXPECT_EQ(path, (std::vector<std::size_t>{0, 1, 2, 0}));
}

TEST(Trajectory, SingleState) {
  ChainSpec one{TransitionMatrix::validate({{1.0}}), std::nullopt, "one"};
  auto path = sample_trajectory(one, 10, 1);
  EXPECT_EQ(path, std::vector<std::size_t>(10, 0));
}

TEST(Trajectory, IidFrequency) {
  auto path = sample_trajectory(iid2(), 100'000, 99);
  const double zeros = static_cast<double>(std::count(path.begin(), path.end(), 0u));
  EXPECT_NEAR(zeros / 1e5, 0.5, 0.01);
}

TEST(Trajectory, SamplerNeverPicksZeroProbabilityStates) {
  // Row sums of 0.1 * 10 round below 1; the trailing zero must stay unreachable.
  std::vector<std::vector<double>> rows(11, std::vector<double>(11, 0.0));
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) rows[i][j] = 0.1;
  rows[10][0] = 1.0;
  ChainSpec chain{TransitionMatrix::validate(rows), point_mass(0, 11), "t"};
  auto path = sample_trajectory(chain, 50'000, 3);
  EXPECT_EQ(std::count(path.begin(), path.end(), 10u), 0);
}

TEST(MissingMass, IidSingleStep) {
  const std::vector<double> pi{0.5, 0.5};
  auto samples = sample_missing_mass(config(iid2(), 1, 1000), pi);
  for (const auto& s : samples) {
    EXPECT_EQ(s.value, 0.5);
    EXPECT_EQ(s.unseen.size(), 1u);
  }
}

TEST(MissingMass, CycleCoversEverything) {
  std::vector<double> pi(3, 1.0 / 3.0);
  auto samples = sample_missing_mass(config(cycle_from0(), 3, 100), pi);
  for (const auto& s : samples) EXPECT_EQ(s.value, 0.0);
}

TEST(MissingMass, IidTwoStepMean) {
  const std::vector<double> pi{0.5, 0.5};
  auto samples = sample_missing_mass(config(iid2(), 2, 100'000), pi);
  double mean = 0.0;
  for (const auto& s : samples) mean += s.value;
  mean /= static_cast<double>(samples.size());
  // Values are 0 or 0.5 with equal probability: sd 0.25.
  EXPECT_NEAR(mean, oracle::iid_missing_mass_mean(pi, 2), 3 * 0.25 / std::sqrt(1e5));
}

TEST(MissingMass, ValueMatchesUnseenSet) {
  auto chain = mml::testing::random_chain(6, 21);
  auto pi = stationary(chain.matrix).pi;
  auto samples = sample_missing_mass(config(chain, 5, 2000), pi);
  for (const auto& s : samples) {
    double v = 0.0;
    for (auto j : s.unseen.members()) v += pi[j];
    EXPECT_NEAR(s.value, v, 1e-15);
    EXPECT_GE(s.value, 0.0);
    EXPECT_LE(s.value, 1.0);
  }
}

TEST(MissingMass, ReproducibleAcrossWorkerCounts) {
  auto chain = mml::testing::random_chain(5, 4);
  auto pi = stationary(chain.matrix).pi;
  auto a = sample_missing_mass(config(chain, 6, 3000, 42, 1), pi);
  auto b = sample_missing_mass(config(chain, 6, 3000, 42, 4), pi);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_EQ(a[t].value, b[t].value);
    EXPECT_EQ(a[t].unseen, b[t].unseen);
  }
  auto c = sample_missing_mass(config(chain, 6, 3000, 43, 1), pi);
  std::size_t differing = 0;
  for (std::size_t t = 0; t < a.size(); ++t) differing += a[t].unseen != c[t].unseen;
  EXPECT_GT(differing, 0u);
}

TEST(JointSurvival, Examples) {
  auto full = empirical_joint_survival(config(iid2(), 1, 500), StateSet::all(2));
  EXPECT_EQ(full.hits, 0u);

  auto iid = empirical_joint_survival(config(iid2(), 3, 100'000), StateSet::of({1}, 2));
  EXPECT_NEAR(iid.p_hat, 0.125, iid.half_width(kZ99) + 1e-12);

  auto cyc = empirical_joint_survival(config(cycle_from0(), 1, 100), StateSet::of({2}, 3));
  EXPECT_EQ(cyc.p_hat, 1.0);
  EXPECT_THROW(empirical_joint_survival(config(iid2(), 1, 10), StateSet{}), Error);
}

TEST(JointSurvival, AgreesWithSamples) {
  auto chain = mml::testing::random_chain(5, 17);
  auto pi = stationary(chain.matrix).pi;
  auto cfg = config(chain, 4, 5000);
  auto samples = sample_missing_mass(cfg, pi);
  auto counts = unseen_superset_counts(samples, 5);
  for (std::uint64_t mask = 1; mask < 32; ++mask) {
    auto j = StateSet::from_mask(mask, 5);
    auto direct = empirical_joint_survival(cfg, j);
    auto from_samples = joint_survival_from_samples(samples, j);
    EXPECT_EQ(direct.hits, from_samples.hits) << j.to_string();
    EXPECT_EQ(counts[mask], direct.hits);
  }
  EXPECT_EQ(counts[0], samples.size());
}

TEST(HittingTail, Examples) {
  auto in_b = empirical_hitting_tail(config(cycle_from0(), 1, 100), StateSet::of({0}, 3),
                                     std::vector<std::uint64_t>{1, 2, 5});
  for (const auto& t : in_b.tails) EXPECT_EQ(t.hits, 0u);

  auto iid = empirical_hitting_tail(config(iid2(), 1, 100'000), StateSet::of({1}, 2),
                                    std::vector<std::uint64_t>{5});
  EXPECT_NEAR(iid.tails[0].p_hat, 0.03125, iid.tails[0].half_width(kZ99));
  EXPECT_EQ(iid.cap_hits, 0u);

  // X_1 = 0, X_2 = 1, X_3 = 2: the first entry into {2} is step 3.
  auto cyc = empirical_hitting_tail(config(cycle_from0(), 1, 50), StateSet::of({2}, 3),
                                    std::vector<std::uint64_t>{1, 2, 3});
  EXPECT_EQ(cyc.tails[0].p_hat, 1.0);
  EXPECT_EQ(cyc.tails[1].p_hat, 1.0);
  EXPECT_EQ(cyc.tails[2].p_hat, 0.0);
  EXPECT_EQ(cyc.mean_hitting_time, 3.0);
}

TEST(Mgf, Examples) {
  std::vector<MissingMassSample> half(10);
  for (auto& s : half) s.value = 0.5;
  EXPECT_EQ(empirical_mgf(half, 0.0), 1.0);
  EXPECT_NEAR(empirical_mgf(half, 2.0), std::numbers::e, 1e-15);

  auto samples = sample_missing_mass(config(iid2(), 1, 1000), std::vector<double>{0.5, 0.5});
  EXPECT_NEAR(empirical_mgf(samples, 1.0), 1.6487212707001282, 1e-14);
  EXPECT_EQ(empirical_mgf_stddev(samples, 1.0), 0.0);
  EXPECT_THROW(empirical_mgf(std::vector<MissingMassSample>{}, 1.0), Error);
}

TEST(Occupancy, ErgodicAverage) {
  auto chain = mml::testing::random_chain(4, 12);
  auto pi = stationary(chain.matrix).pi;
  auto freq = occupancy(chain, 200'000, 5);
  double tv = 0.0;
  for (std::size_t i = 0; i < 4; ++i) tv += 0.5 * std::abs(freq[i] - pi[i]);
  EXPECT_LT(tv, 0.01);
}

TEST(SamplesCsv, Format) {
  std::vector<MissingMassSample> samples(2);
  samples[0].value = 0.25;
  samples[0].unseen = StateSet::of({1, 3}, 4);
  std::ostringstream os;
  write_samples_csv(os, samples);
  EXPECT_EQ(os.str(), "trial,value,unseen_set\n0,0.25,1|3\n1,0,\n");
}
