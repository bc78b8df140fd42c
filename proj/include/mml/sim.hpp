#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mml/chain.hpp"
#include "mml/rng.hpp"
#include "mml/state_set.hpp"

namespace mml {

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;
inline constexpr std::uint64_t kTrajectoryCap = 1'000'000;
/// Trials per scheduling block.
inline constexpr std::size_t kBlockSize = 512;

struct SimConfig {
  ChainSpec chain;
  std::size_t n = 1;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
};

/// Inverse-CDF sampler over the start law and the rows of P.
class ChainSampler {
 public:
  ChainSampler(const TransitionMatrix& p, std::span<const double> start);

  std::size_t size() const { return m_; }
  std::size_t draw_start(SplitMix64& rng) const { return draw(start_cdf_, rng.uniform()); }
  std::size_t step(std::size_t x, SplitMix64& rng) const {
    return draw(std::span<const double>(row_cdf_).subspan(x * m_, m_), rng.uniform());
  }

 private:
  static std::vector<double> cumulative(std::span<const double> probs);
  static std::size_t draw(std::span<const double> cdf, double u);

  std::size_t m_;
  std::vector<double> start_cdf_;
  std::vector<double> row_cdf_;
};

/// X_1, ..., X_n with X_1 ~ start and X_{i+1} ~ P(X_i, .).
std::vector<std::size_t> sample_trajectory(const ChainSpec& chain, std::size_t n,
                                           std::uint64_t stream_seed);

/// Missing mass of one n-step run: sum of pi over the states never visited.
struct MissingMassSample {
  double value = 0.0;
  StateSet unseen;
};

/// One sample per trial, in trial order. Trial t uses stream derive_seed(master_seed, t).
std::vector<MissingMassSample> sample_missing_mass(const SimConfig& config,
                                                   std::span<const double> pi);

struct EmpiricalTail {
  std::string event;
  std::size_t hits = 0;
  std::size_t trials = 0;
  double p_hat = 0.0;
  double ci95_halfwidth = 0.0;

  /// Wald half-width z sqrt(p(1-p)/trials).
  double half_width(double z) const;
};

EmpiricalTail make_tail(std::string event, std::size_t hits, std::size_t trials);

/// Two-sided Clopper-Pearson interval for a binomial proportion.
struct BinomialInterval {
  double lower = 0.0;
  double upper = 1.0;
};
BinomialInterval clopper_pearson(std::size_t hits, std::size_t trials, double confidence);

/// Fraction of trials in which no state of J appears among X_1..X_n,
/// i.e. the empirical Pr[tau_J > n].
EmpiricalTail empirical_joint_survival(const SimConfig& config, const StateSet& j);

/// Same estimate from existing samples: trials whose unseen set contains J.
EmpiricalTail joint_survival_from_samples(std::span<const MissingMassSample> samples,
                                          const StateSet& j);

/// For m <= 20: counts[mask] = number of samples whose unseen set contains
/// the states of `mask`, for every mask in [0, 2^m).
std::vector<std::uint64_t> unseen_superset_counts(std::span<const MissingMassSample> samples,
                                                  std::size_t m);

struct HittingTailResult {
  std::vector<EmpiricalTail> tails;
  /// Trials that reached the trajectory cap without entering B.
  std::size_t cap_hits = 0;
  double mean_hitting_time = 0.0;
};

/// Simulates N_B = min{i >= 1 : X_i in B} per trial (capped at 1e6 steps)
/// and reports Pr[N_B > t] for each threshold. `config.n` is unused.
HittingTailResult empirical_hitting_tail(const SimConfig& config, const StateSet& b,
                                         std::span<const std::uint64_t> thresholds);

/// Mean of exp(s * value) over the samples, summed in sample order.
double empirical_mgf(std::span<const MissingMassSample> samples, double s);

/// Sample standard deviation of exp(s * value); 0 for fewer than two samples.
double empirical_mgf_stddev(std::span<const MissingMassSample> samples, double s);

/// Visit frequencies of a single n-step run.
std::vector<double> occupancy(const ChainSpec& chain, std::size_t n, std::uint64_t stream_seed);

/// CSV dump with header `trial,value,unseen_set`; unseen_set is `|`-separated.
void write_samples_csv(std::ostream& out, std::span<const MissingMassSample> samples);

/// Splits [0, trials) into fixed blocks and runs body(begin, end) on `workers`
/// threads. Bodies must only write trial-indexed output.
void for_each_block(std::size_t trials, std::size_t workers,
                    const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace mml
