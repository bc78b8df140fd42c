#include "mml/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include <boost/math/distributions/beta.hpp>

#include "mml/error.hpp"

namespace mml {

namespace {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require_nonempty(const StateSet& s, const char* what) {
  if (s.empty()) throw Error(ErrorKind::EmptySet, std::string(what) + " is empty");
}

void check_config(const SimConfig& config) {
  if (config.n < 1) throw Error(ErrorKind::BadParams, "run length n must be >= 1");
  if (config.trials < 1) throw Error(ErrorKind::BadParams, "trials must be >= 1");
}

}  // namespace

ChainSampler::ChainSampler(const TransitionMatrix& p, std::span<const double> start)
    : m_(p.size()), start_cdf_(cumulative(start)) {
  validate_start(start, m_);
  row_cdf_.reserve(m_ * m_);
  for (std::size_t x = 0; x < m_; ++x) {
    auto c = cumulative(p.row(x));
    row_cdf_.insert(row_cdf_.end(), c.begin(), c.end());
  }
}

std::vector<double> ChainSampler::cumulative(std::span<const double> probs) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
    if (probs[i] > 0.0) last_positive = i;
  }
  // Rounding must not leave a gap that selects a zero-probability tail state.
  for (std::size_t i = last_positive; i < cdf.size(); ++i) cdf[i] = 1.0;
  return cdf;
}

std::size_t ChainSampler::draw(std::span<const double> cdf, double u) {
  if (cdf.size() <= 16) {
    for (std::size_t i = 0; i < cdf.size(); ++i)
      if (u < cdf[i]) return i;
    return cdf.size() - 1;
  }
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return it == cdf.end() ? cdf.size() - 1 : static_cast<std::size_t>(it - cdf.begin());
}

void for_each_block(std::size_t trials, std::size_t workers,
                    const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t blocks = (trials + kBlockSize - 1) / kBlockSize;
  auto run_block = [&](std::size_t b) {
    body(b * kBlockSize, std::min(trials, (b + 1) * kBlockSize));
  };
  workers = std::max<std::size_t>(1, std::min(workers, blocks));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b = next++; b < blocks; b = next++) run_block(b);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<std::size_t> sample_trajectory(const ChainSpec& chain, std::size_t n,
                                           std::uint64_t stream_seed) {
  const auto start = initial_law(chain);
  ChainSampler sampler(chain.matrix, start);
  SplitMix64 rng(stream_seed);
  std::vector<std::size_t> path;
  path.reserve(n);
  if (n == 0) return path;
  path.push_back(sampler.draw_start(rng));
  while (path.size() < n) path.push_back(sampler.step(path.back(), rng));
  return path;
}

std::vector<MissingMassSample> sample_missing_mass(const SimConfig& config,
                                                   std::span<const double> pi) {
  check_config(config);
  const std::size_t m = config.chain.matrix.size();
  if (pi.size() != m) throw Error(ErrorKind::BadParams, "pi has the wrong length");
  const auto start = initial_law(config.chain);
  const ChainSampler sampler(config.chain.matrix, start);

  std::vector<MissingMassSample> out(config.trials);
  for_each_block(config.trials, config.workers, [&](std::size_t begin, std::size_t end) {
    std::vector<char> seen(m);
    for (std::size_t t = begin; t < end; ++t) {
      SplitMix64 rng(derive_seed(config.master_seed, t));
      std::fill(seen.begin(), seen.end(), 0);
      std::size_t x = sampler.draw_start(rng);
      seen[x] = 1;
      std::size_t distinct = 1;
      for (std::size_t i = 1; i < config.n; ++i) {
        x = sampler.step(x, rng);
        if (!seen[x]) {
          seen[x] = 1;
          ++distinct;
        }
      }
      std::vector<std::size_t> unseen;
      unseen.reserve(m - distinct);
      for (std::size_t j = 0; j < m; ++j)
        if (!seen[j]) unseen.push_back(j);
      auto set = StateSet::of(std::move(unseen), m);
      out[t].value = set.mass(pi);
      out[t].unseen = std::move(set);
    }
  });
  return out;
}

double EmpiricalTail::half_width(double z) const {
  if (trials == 0) return 0.0;
  return z * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

EmpiricalTail make_tail(std::string event, std::size_t hits, std::size_t trials) {
  EmpiricalTail tail;
  tail.event = std::move(event);
  tail.hits = hits;
  tail.trials = trials;
  tail.p_hat = trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
  tail.ci95_halfwidth = tail.half_width(kZ95);
  return tail;
}

BinomialInterval clopper_pearson(std::size_t hits, std::size_t trials, double confidence) {
  if (trials == 0 || hits > trials)
    throw Error(ErrorKind::BadParams, "clopper_pearson needs 0 <= hits <= trials, trials > 0");
  const double alpha = 1.0 - confidence;
  const auto k = static_cast<double>(hits);
  const auto n = static_cast<double>(trials);
  BinomialInterval out;
  if (hits > 0)
    out.lower = boost::math::quantile(boost::math::beta_distribution<>(k, n - k + 1), alpha / 2);
  if (hits < trials)
    out.upper =
        boost::math::quantile(boost::math::beta_distribution<>(k + 1, n - k), 1 - alpha / 2);
  return out;
}

EmpiricalTail empirical_joint_survival(const SimConfig& config, const StateSet& j) {
  require_nonempty(j, "set J");
  check_config(config);
  const std::size_t m = config.chain.matrix.size();
  if (j.members().back() >= m) throw Error(ErrorKind::BadParams, "set J out of range");
  const auto in_j = j.indicator(m);
  const auto start = initial_law(config.chain);
  const ChainSampler sampler(config.chain.matrix, start);

  std::vector<char> survived(config.trials, 0);
  for_each_block(config.trials, config.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      SplitMix64 rng(derive_seed(config.master_seed, t));
      std::size_t x = sampler.draw_start(rng);
      bool hit = in_j[x];
      for (std::size_t i = 1; i < config.n && !hit; ++i) {
        x = sampler.step(x, rng);
        hit = in_j[x];
      }
      survived[t] = !hit;
    }
  });
  const auto hits = static_cast<std::size_t>(std::count(survived.begin(), survived.end(), 1));
  return make_tail("tau_J>n;J=" + j.to_string('|') + ";n=" + std::to_string(config.n), hits,
                   config.trials);
}

EmpiricalTail joint_survival_from_samples(std::span<const MissingMassSample> samples,
                                          const StateSet& j) {
  require_nonempty(j, "set J");
  std::size_t hits = 0;
  for (const auto& s : samples)
    if (j.is_subset_of(s.unseen)) ++hits;
  return make_tail("tau_J>n;J=" + j.to_string('|'), hits, samples.size());
}

std::vector<std::uint64_t> unseen_superset_counts(std::span<const MissingMassSample> samples,
                                                  std::size_t m) {
  if (m > 20) throw Error(ErrorKind::TooManyStates, "superset counts need m <= 20");
  const std::size_t count = std::size_t{1} << m;
  std::vector<std::uint64_t> counts(count, 0);
  for (const auto& s : samples) ++counts[s.unseen.mask()];
  // Superset-sum transform: counts[mask] += counts[mask | bit].
  for (std::size_t bit = 0; bit < m; ++bit)
    for (std::size_t mask = 0; mask < count; ++mask)
      if (!(mask >> bit & 1u)) counts[mask] += counts[mask | (std::size_t{1} << bit)];
  return counts;
}

HittingTailResult empirical_hitting_tail(const SimConfig& config, const StateSet& b,
                                         std::span<const std::uint64_t> thresholds) {
  require_nonempty(b, "set B");
  if (config.trials < 1) throw Error(ErrorKind::BadParams, "trials must be >= 1");
  const std::size_t m = config.chain.matrix.size();
  if (b.members().back() >= m) throw Error(ErrorKind::BadParams, "set B out of range");
  const auto in_b = b.indicator(m);
  const auto start = initial_law(config.chain);
  const ChainSampler sampler(config.chain.matrix, start);

  // Entry times; kTrajectoryCap + 1 marks a trial that never entered B.
  std::vector<std::uint64_t> entry(config.trials);
  for_each_block(config.trials, config.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      SplitMix64 rng(derive_seed(config.master_seed, t));
      std::size_t x = sampler.draw_start(rng);
      std::uint64_t i = 1;
      while (!in_b[x] && i <= kTrajectoryCap) {
        x = sampler.step(x, rng);
        ++i;
      }
      entry[t] = in_b[x] ? i : kTrajectoryCap + 1;
    }
  });

  HittingTailResult out;
  CompensatedSum total;
  for (auto e : entry) {
    if (e > kTrajectoryCap) ++out.cap_hits;
    total.add(static_cast<double>(e));
  }
  out.mean_hitting_time = total.value() / static_cast<double>(config.trials);
  for (auto threshold : thresholds) {
    const auto hits = static_cast<std::size_t>(
        std::count_if(entry.begin(), entry.end(), [&](auto e) { return e > threshold; }));
    out.tails.push_back(make_tail("N_B>t;B=" + b.to_string('|') + ";t=" +
                                      std::to_string(threshold),
                                  hits, config.trials));
  }
  return out;
}

double empirical_mgf(std::span<const MissingMassSample> samples, double s) {
  if (samples.empty()) throw Error(ErrorKind::BadParams, "empirical_mgf needs samples");
  if (!std::isfinite(s)) throw Error(ErrorKind::DomainError, "s must be finite");
  CompensatedSum total;
  for (const auto& sample : samples) total.add(std::exp(s * sample.value));
  return total.value() / static_cast<double>(samples.size());
}

double empirical_mgf_stddev(std::span<const MissingMassSample> samples, double s) {
  if (samples.size() < 2) return 0.0;
  const double mean = empirical_mgf(samples, s);
  CompensatedSum sq;
  for (const auto& sample : samples) {
    const double d = std::exp(s * sample.value) - mean;
    sq.add(d * d);
  }
  return std::sqrt(sq.value() / static_cast<double>(samples.size() - 1));
}

std::vector<double> occupancy(const ChainSpec& chain, std::size_t n, std::uint64_t stream_seed) {
  if (n < 1) throw Error(ErrorKind::BadParams, "run length n must be >= 1");
  const auto start = initial_law(chain);
  const ChainSampler sampler(chain.matrix, start);
  SplitMix64 rng(stream_seed);
  std::vector<std::uint64_t> visits(sampler.size(), 0);
  std::size_t x = sampler.draw_start(rng);
  ++visits[x];
  for (std::size_t i = 1; i < n; ++i) {
    x = sampler.step(x, rng);
    ++visits[x];
  }
  std::vector<double> freq(visits.size());
  for (std::size_t i = 0; i < visits.size(); ++i)
    freq[i] = static_cast<double>(visits[i]) / static_cast<double>(n);
  return freq;
}

void write_samples_csv(std::ostream& out, std::span<const MissingMassSample> samples) {
  out << "trial,value,unseen_set\n";
  char buf[32];
  for (std::size_t t = 0; t < samples.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%.17g", samples[t].value);
    out << t << "," << buf << "," << samples[t].unseen.to_string('|') << "\n";
  }
}

}  // namespace mml
