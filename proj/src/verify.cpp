#include "mml/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mml/error.hpp"
#include "mml/hitting.hpp"
#include "mml/rng.hpp"
#include "mml/sim.hpp"

namespace mml {

namespace {

constexpr double kAlphas[] = {0.2, 0.5, 1.0, 2.0};

ChainSpec random_dense(std::size_t m, double alpha, std::uint64_t seed) {
  FamilyParams fp;
  fp.family = Family::RandomDense;
  fp.m = m;
  fp.alpha = alpha;
  fp.seed = seed;
  return generate(fp);
}

// Dirichlet(1) mixed with the uniform law so no symbol is vanishingly rare.
std::vector<double> random_mu(std::size_t m, SplitMix64& rng) {
  std::vector<double> mu(m);
  double total = 0.0;
  for (auto& v : mu) {
    v = -std::log1p(-rng.uniform());
    total += v;
  }
  for (auto& v : mu) v = 0.8 * v / total + 0.2 / static_cast<double>(m);
  const double head = std::accumulate(mu.begin(), mu.end() - 1, 0.0);
  mu.back() = 1.0 - head;
  return mu;
}

std::uint64_t random_nonempty_mask(std::size_t m, SplitMix64& rng) {
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  std::uint64_t mask = 0;
  while (mask == 0) mask = rng() & full;
  return mask;
}

std::vector<StateSet> configured_sets(const VerifyOptions& options, std::size_t m) {
  std::vector<StateSet> out;
  for (const auto& s : options.sets) {
    if (s.empty() || *std::max_element(s.begin(), s.end()) >= m) continue;
    out.push_back(StateSet::of(s, m));
  }
  return out;
}

// J family of the simulation suites: every non-empty subset when m <= 10,
// else the singletons and `extra` random sets.
std::vector<std::uint64_t> j_masks(std::size_t m, std::size_t extra, SplitMix64& rng) {
  std::vector<std::uint64_t> masks;
  if (m <= 10) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) masks.push_back(mask);
    return masks;
  }
  std::set<std::uint64_t> seen;
  for (std::size_t x = 0; x < m; ++x) seen.insert(std::uint64_t{1} << x);
  for (std::size_t k = 0; k < extra; ++k) seen.insert(random_nonempty_mask(m, rng));
  return {seen.begin(), seen.end()};
}

std::size_t argmax_state(const std::vector<double>& h) {
  return static_cast<std::size_t>(std::max_element(h.begin(), h.end()) - h.begin());
}

std::string chain_label(const ChainSpec& chain, std::size_t index) {
  return chain.id.empty() ? "chain" + std::to_string(index) : chain.id;
}

BoundReport tail_report(std::string name, const ChainSpec& chain, std::size_t index,
                        const EmpiricalTail& tail, double bound) {
  BoundReport r;
  r.name = std::move(name);
  r.chain_id = chain_label(chain, index);
  r.value = tail.p_hat;
  r.bound = bound;
  r.ci = tail.half_width(kZ99);
  r.vacuous = bound >= 1.0;
  return r;
}

void require_enumerable(const ChainSpec& chain) {
  if (chain.matrix.size() > kMaxEnumerationStates)
    throw Error(ErrorKind::TooManyStates,
                chain.id + ": suite needs exact T(0.5), which requires m <= 20");
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemma1", "lemma2", "prop1", "thm1",
                                              "cor1",   "cor3",   "iid"};
  return names;
}

std::vector<ChainSpec> family_suite(std::uint64_t seed) {
  std::vector<ChainSpec> out;
  FamilyParams fp;
  fp.family = Family::LazyCycle;
  fp.hold = 0.5;
  for (std::size_t m : {5, 10}) {
    fp.m = m;
    out.push_back(generate(fp));
  }
  fp = {};
  fp.family = Family::BirthDeath;
  fp.m = 8;
  fp.p = 0.3;
  fp.q = 0.3;
  out.push_back(generate(fp));
  const std::size_t sizes[] = {4, 6, 8, 10};
  for (std::size_t k = 0; k < 4; ++k)
    out.push_back(random_dense(sizes[k], kAlphas[k], derive_seed(seed, 1000 + k)));
  return out;
}

std::vector<ChainSpec> prop1_suite(std::uint64_t seed, std::size_t count) {
  auto out = family_suite(seed);
  FamilyParams fp;
  fp.family = Family::TwoState;
  fp.p = 0.1;
  fp.q = 0.2;
  out.push_back(generate(fp));
  SplitMix64 rng(derive_seed(seed, 2000));
  fp = {};
  fp.family = Family::Iid;
  fp.mu = random_mu(4, rng);
  out.push_back(generate(fp));
  for (std::size_t k = 0; out.size() < count; ++k)
    out.push_back(random_dense(3 + k % 8, kAlphas[k % 4], derive_seed(seed, 3000 + k)));
  if (out.size() > count) out.erase(out.begin() + static_cast<std::ptrdiff_t>(count), out.end());
  return out;
}

SuiteResult verify_lemma1(const VerifyOptions& options) {
  SuiteResult result{"lemma1", {}, options.seed};
  const std::size_t span = std::max<std::size_t>(1, options.lemma1_m_max - 1);
  const std::size_t chains = options.chains.empty() ? options.lemma1_chains : options.chains.size();
  for (std::size_t i = 0; i < chains; ++i) {
    const ChainSpec chain =
        options.chains.empty()
            ? random_dense(2 + i % span, kAlphas[(i / span) % 4], derive_seed(options.seed, i))
            : options.chains[i];
    const std::size_t m = chain.matrix.size();
    if (m < 2) continue;
    const auto pi = stationary(chain.matrix).pi;

    std::vector<std::pair<StateSet, StateSet>> pairs;
    const auto given = configured_sets(options, m);
    if (!given.empty()) {
      for (const auto& a : given)
        for (const auto& b : given)
          if (!a.intersects(b)) pairs.emplace_back(a, b);
    } else {
      // Disjoint non-empty pairs: 3^m - 2^(m+1) + 1 of them.
      const double total = std::pow(3.0, static_cast<double>(m)) -
                           std::pow(2.0, static_cast<double>(m + 1)) + 1.0;
      if (total <= static_cast<double>(options.lemma1_max_pairs)) {
        const std::uint64_t count = std::uint64_t{1} << m;
        for (std::uint64_t a = 1; a < count; ++a)
          for (std::uint64_t b = 1; b < count; ++b)
            if ((a & b) == 0)
              pairs.emplace_back(StateSet::from_mask(a, m), StateSet::from_mask(b, m));
      } else {
        SplitMix64 rng(derive_seed(options.seed ^ 0x5eedULL, i));
        std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
        while (seen.size() < options.lemma1_max_pairs) {
          std::uint64_t a = 0, b = 0;
          for (std::size_t x = 0; x < m; ++x) {
            const auto role = rng() % 3;
            if (role == 1) a |= std::uint64_t{1} << x;
            if (role == 2) b |= std::uint64_t{1} << x;
          }
          if (a == 0 || b == 0 || !seen.insert({a, b}).second) continue;
          pairs.emplace_back(StateSet::from_mask(a, m), StateSet::from_mask(b, m));
        }
      }
    }
    for (const auto& [a, b] : pairs) {
      auto r = check_lemma1(chain.matrix, pi, a, b);
      r.chain_id = chain_label(chain, i);
      result.reports.push_back(std::move(r));
    }
  }
  return result;
}

SuiteResult verify_lemma2(const VerifyOptions& options) {
  SuiteResult result{"lemma2", {}, options.seed};
  const std::size_t span = std::max<std::size_t>(1, options.lemma2_m_max - 1);
  const std::size_t chains = options.chains.empty() ? options.lemma2_chains : options.chains.size();
  for (std::size_t i = 0; i < chains; ++i) {
    const ChainSpec chain =
        options.chains.empty()
            ? random_dense(2 + i % span, kAlphas[(i / span) % 4], derive_seed(options.seed, i))
            : options.chains[i];
    require_enumerable(chain);
    const std::size_t m = chain.matrix.size();
    const auto pi = stationary(chain.matrix).pi;
    const double t_half = t_large(chain.matrix, pi, 0.5).value;

    std::vector<StateSet> sets = configured_sets(options, m);
    if (sets.empty())
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask)
        sets.push_back(StateSet::from_mask(mask, m));

    double worst_constant = 0.0;
    for (const auto& a : sets) {
      auto r = check_lemma2(chain.matrix, pi, a, t_half);
      r.chain_id = chain_label(chain, i);
      if (t_half > 0.0) worst_constant = std::max(worst_constant, r.value * a.mass(pi) / t_half);
      result.reports.push_back(std::move(r));
    }
    // Informational: the smallest constant that would do for every A on this chain.
    BoundReport info;
    info.name = "lemma2-constant";
    info.chain_id = chain_label(chain, i);
    info.bound = 2.0;
    info.value = worst_constant;
    info.vacuous = true;
    info.with("T_half", t_half);
    info.evaluate();
    result.reports.push_back(std::move(info));
  }
  return result;
}

SuiteResult verify_prop1(const VerifyOptions& options) {
  SuiteResult result{"prop1", {}, options.seed};
  const auto chains =
      options.chains.empty() ? prop1_suite(options.seed, options.prop1_chains) : options.chains;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const auto& chain = chains[i];
    const std::size_t m = chain.matrix.size();
    if (m < 2) continue;
    SplitMix64 rng(derive_seed(options.seed ^ 0xb0b0ULL, i));
    std::vector<StateSet> targets = configured_sets(options, m);
    if (targets.empty()) {
      targets.push_back(StateSet::of({0}, m));
      std::vector<std::size_t> order(m);
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t k = m; k > 1; --k) std::swap(order[k - 1], order[rng() % k]);
      order.resize(std::max<std::size_t>(1, m / 3));
      auto extra = StateSet::of(order, m);
      if (extra != targets.front()) targets.push_back(std::move(extra));
    }

    for (std::size_t bi = 0; bi < targets.size(); ++bi) {
      const auto& b = targets[bi];
      if (b.size() == m) continue;
      const auto table = hitting_table(chain.matrix, b);
      // Starting from the slowest state makes E N_B the worst case T(B) + 1.
      const std::size_t start = argmax_state(table.h);
      const double expected = 1.0 + table.h[start];
      const double horizon = 50.0 * expected;
      std::vector<std::uint64_t> thresholds;
      for (int k = 0; k <= 24; ++k) {
        const auto t = static_cast<std::uint64_t>(std::llround(horizon * k / 24.0));
        if (thresholds.empty() || thresholds.back() != t) thresholds.push_back(t);
      }
      ChainSpec from_start{chain.matrix, point_mass(start, m), chain.id};
      SimConfig config{from_start, 1, options.prop1_trials,
                       derive_seed(derive_seed(options.seed, i), bi), options.workers};
      const auto sim = empirical_hitting_tail(config, b, thresholds);
      for (std::size_t k = 0; k < thresholds.size(); ++k) {
        auto r = tail_report("prop1", chain, i, sim.tails[k],
                             hitting_tail_bound(expected, thresholds[k]));
        r.with("B", b.to_string('|'))
            .with("start", std::to_string(start))
            .with("t", std::to_string(thresholds[k]))
            .with("E_N_B", expected)
            .with("cap_hits", std::to_string(sim.cap_hits));
        r.evaluate();
        result.reports.push_back(std::move(r));
      }
      if (sim.cap_hits > 0) {
        BoundReport cap;
        cap.name = "prop1-cap";
        cap.chain_id = chain_label(chain, i);
        cap.value = static_cast<double>(sim.cap_hits);
        cap.bound = 0.0;
        cap.tolerance = 0.0;
        cap.with("B", b.to_string('|'));
        cap.evaluate();
        result.reports.push_back(std::move(cap));
      }
    }
  }
  return result;
}

SuiteResult verify_thm1(const VerifyOptions& options) {
  SuiteResult result{"thm1", {}, options.seed};
  const auto chains = options.chains.empty() ? family_suite(options.seed) : options.chains;
  std::vector<CalibrationInstance> all_instances;

  for (std::size_t i = 0; i < chains.size(); ++i) {
    const auto& chain = chains[i];
    require_enumerable(chain);
    const std::size_t m = chain.matrix.size();
    const auto pi = stationary(chain.matrix).pi;
    const double t_half = t_large(chain.matrix, pi, options.epsilon).value;
    if (t_half == 0.0) continue;

    SplitMix64 rng(derive_seed(options.seed ^ 0x7a7aULL, i));
    std::vector<std::uint64_t> masks;
    for (const auto& s : configured_sets(options, m)) masks.push_back(s.mask());
    if (masks.empty()) masks = j_masks(m, 20, rng);

    std::vector<CalibrationInstance> chain_instances;
    for (std::size_t ni = 0; ni < options.n_grid.size(); ++ni) {
      const std::size_t n = options.n_grid[ni];
      if (static_cast<double>(n) < t_half) continue;
      SimConfig config{chain, n, options.trials, derive_seed(derive_seed(options.seed, i), ni),
                       options.workers};
      const auto samples = sample_missing_mass(config, pi);
      const auto counts = unseen_superset_counts(samples, m);

      BoundParams params;
      params.c = options.c;
      params.t_half = t_half;
      params.n = n;
      params.pi = pi;
      for (auto mask : masks) {
        const auto j = StateSet::from_mask(mask, m);
        const auto tail = make_tail("tau_J>n", counts[mask], samples.size());
        auto r = tail_report("thm1", chain, i, tail, joint_survival_bound(params, j));
        r.with("J", j.to_string('|')).with("n", std::to_string(n)).with("T", t_half);
        r.with("c", options.c);
        r.evaluate();
        result.reports.push_back(std::move(r));

        CalibrationInstance inst;
        inst.chain_id = chain_label(chain, i);
        inst.j = j;
        inst.n = n;
        inst.pi_j = j.mass(pi);
        inst.t_half = t_half;
        inst.tail = tail;
        chain_instances.push_back(std::move(inst));
      }

      const double root_n = std::sqrt(static_cast<double>(samples.size()));
      for (double s : options.mgf_s) {
        const double mgf = empirical_mgf(samples, s);
        const double se = empirical_mgf_stddev(samples, s) / root_n;
        for (auto form : {MgfForm::Eq3, MgfForm::Cor1}) {
          BoundReport r;
          r.name = "mgf-" + std::string(form == MgfForm::Eq3 ? "eq3" : "cor1");
          r.chain_id = chain_label(chain, i);
          r.value = mgf;
          r.bound = bernoulli_product_mgf(params, form, s);
          r.ci = kZ99 * se;
          r.with("form", to_string(form)).with("s", s).with("n", std::to_string(n));
          r.with("T", t_half).with("c", options.c);
          r.evaluate();
          result.reports.push_back(std::move(r));
        }
      }
    }

    auto publish = [&](const std::string& scope, std::vector<CalibrationInstance> instances) {
      BoundReport info;
      info.name = "calibrated-c";
      info.chain_id = scope;
      info.vacuous = true;
      info.value = options.c;
      try {
        const auto cal = certify_c(std::move(instances));
        const auto& b = cal.instances[cal.binding];
        info.bound = cal.c;
        info.with("binding_chain", b.chain_id)
            .with("binding_J", b.j.to_string('|'))
            .with("binding_n", std::to_string(b.n))
            .with("resolution", cal.resolution);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientTrials) throw;
        info.bound = std::numeric_limits<double>::infinity();
        info.with("note", "no survival events observed");
      }
      info.evaluate();
      result.reports.push_back(std::move(info));
    };
    if (!chain_instances.empty()) {
      all_instances.insert(all_instances.end(), chain_instances.begin(), chain_instances.end());
      publish(chain_label(chain, i), std::move(chain_instances));
    }
  }
  if (!all_instances.empty()) {
    // Suite-wide constant: the largest c certified on every instance.
    BoundReport info;
    info.name = "calibrated-c";
    info.chain_id = "suite";
    info.vacuous = true;
    info.value = options.c;
    try {
      const auto cal = certify_c(std::move(all_instances));
      info.bound = cal.c;
      const auto& b = cal.instances[cal.binding];
      info.with("binding_chain", b.chain_id)
          .with("binding_J", b.j.to_string('|'))
          .with("binding_n", std::to_string(b.n))
          .with("resolution", cal.resolution);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientTrials) throw;
      info.bound = std::numeric_limits<double>::infinity();
    }
    info.evaluate();
    result.reports.push_back(std::move(info));
  }
  return result;
}

SuiteResult verify_cor1(const VerifyOptions& options) {
  SuiteResult result{"cor1", {}, options.seed};
  const auto chains = options.chains.empty() ? family_suite(options.seed) : options.chains;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const auto& chain = chains[i];
    require_enumerable(chain);
    const auto pi = stationary(chain.matrix).pi;
    const double t_half = t_large(chain.matrix, pi, options.epsilon).value;
    if (t_half == 0.0) continue;
    for (std::size_t ni = 0; ni < options.n_grid.size(); ++ni) {
      const std::size_t n = options.n_grid[ni];
      if (static_cast<double>(n) < t_half) continue;
      SimConfig config{chain, n, options.trials, derive_seed(derive_seed(options.seed, i), ni),
                       options.workers};
      const auto samples = sample_missing_mass(config, pi);
      BoundParams params;
      params.c = options.c;
      params.t_half = t_half;
      params.n = n;
      params.pi = pi;
      for (double eps : options.cor1_eps) {
        const auto tail_bound = missing_mass_tail_bound(params, eps, options.c2);
        const auto exceed = static_cast<std::size_t>(
            std::count_if(samples.begin(), samples.end(),
                          [&](const auto& s) { return s.value > tail_bound.threshold; }));
        const auto tail = make_tail("MM>threshold", exceed, samples.size());
        auto r = tail_report("cor1", chain, i, tail, tail_bound.failure_bound);
        r.vacuous = r.vacuous || tail_bound.threshold >= 1.0;
        r.with("side", "upper").with("eps", eps).with("n", std::to_string(n));
        r.with("threshold", tail_bound.threshold).with("T", t_half);
        r.with("c", options.c).with("c2", options.c2);
        r.evaluate();
        result.reports.push_back(std::move(r));
      }
    }
  }
  return result;
}

SuiteResult verify_cor3(const VerifyOptions& options) {
  SuiteResult result{"cor3", {}, options.seed};
  const auto chains = options.chains.empty() ? family_suite(options.seed) : options.chains;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const auto& chain = chains[i];
    require_enumerable(chain);
    const std::size_t m = chain.matrix.size();
    if (m < 2) continue;
    const auto pi = stationary(chain.matrix).pi;
    const double t_half = t_large(chain.matrix, pi, 0.5).value;

    SplitMix64 rng(derive_seed(options.seed ^ 0xc0c0ULL, i));
    std::vector<StateSet> sets = configured_sets(options, m);
    if (sets.empty()) {
      sets.push_back(StateSet::of({0}, m));
      sets.push_back(StateSet::of({m / 2}, m));
      const std::uint64_t full = (std::uint64_t{1} << m) - 1;
      std::uint64_t mask = 0;
      while (mask == 0 || mask == full) mask = random_nonempty_mask(m, rng);
      sets.push_back(StateSet::from_mask(mask, m));
    }

    for (std::size_t ai = 0; ai < sets.size(); ++ai) {
      const auto& a = sets[ai];
      if (a.size() == m) continue;
      const double pi_a = a.mass(pi);
      const auto table = hitting_table(chain.matrix, a);
      const std::size_t start = argmax_state(table.h);
      // Grid from T(0.5) until the bound reaches e^-7.
      const double t_end = std::max(t_half, 7.0 * t_half / (options.c * pi_a));
      std::vector<std::uint64_t> thresholds;
      for (int k = 0; k <= 19; ++k) {
        const auto t = static_cast<std::uint64_t>(std::ceil(t_half + (t_end - t_half) * k / 19.0));
        if (thresholds.empty() || thresholds.back() != t) thresholds.push_back(t);
      }
      ChainSpec from_start{chain.matrix, point_mass(start, m), chain.id};
      SimConfig config{from_start, 1, options.prop1_trials,
                       derive_seed(derive_seed(options.seed, i), ai), options.workers};
      const auto sim = empirical_hitting_tail(config, a, thresholds);
      for (std::size_t k = 0; k < thresholds.size(); ++k) {
        auto r = tail_report("cor3", chain, i, sim.tails[k],
                             explicit_hitting_tail(pi_a, t_half, thresholds[k], options.c));
        r.with("A", a.to_string('|'))
            .with("start", std::to_string(start))
            .with("t", std::to_string(thresholds[k]))
            .with("pi_A", pi_a)
            .with("T", t_half)
            .with("c", options.c);
        r.evaluate();
        result.reports.push_back(std::move(r));
      }
    }
  }
  return result;
}

SuiteResult verify_iid(const VerifyOptions& options) {
  SuiteResult result{"iid", {}, options.seed};
  for (std::size_t mi = 0; mi < options.iid_m.size(); ++mi) {
    const std::size_t m = options.iid_m[mi];
    if (m > 20) throw Error(ErrorKind::TooManyStates, "iid suite needs m <= 20");
    SplitMix64 rng(derive_seed(options.seed ^ 0x11d0ULL, mi));
    FamilyParams fp;
    fp.family = Family::Iid;
    fp.mu = random_mu(m, rng);
    const auto chain = generate(fp);
    const auto& mu = fp.mu;

    std::vector<std::uint64_t> masks;
    for (const auto& s : configured_sets(options, m)) masks.push_back(s.mask());
    if (masks.empty()) {
      std::set<std::uint64_t> chosen;
      for (std::size_t x = 0; x < m; ++x) chosen.insert(std::uint64_t{1} << x);
      const std::uint64_t available = (std::uint64_t{1} << m) - 1;
      const std::size_t target = std::min<std::uint64_t>(available, m + options.iid_random_sets);
      while (chosen.size() < target) chosen.insert(random_nonempty_mask(m, rng));
      masks.assign(chosen.begin(), chosen.end());
    }

    for (auto mask : masks) {
      auto r = product_inequality_check(mu, StateSet::from_mask(mask, m));
      r.chain_id = chain.id;
      result.reports.push_back(std::move(r));
    }

    for (std::size_t ni = 0; ni < options.iid_n.size(); ++ni) {
      const std::size_t n = options.iid_n[ni];
      SimConfig config{chain, n, options.trials, derive_seed(derive_seed(options.seed, mi), ni),
                       options.workers};
      const auto samples = sample_missing_mass(config, mu);
      const auto counts = unseen_superset_counts(samples, m);

      BoundParams iid_params;
      iid_params.c = 1.0;
      iid_params.t_half = 1.0;
      iid_params.n = n;
      iid_params.pi = mu;
      iid_params.iid_mode = true;

      for (auto mask : masks) {
        const auto j = StateSet::from_mask(mask, m);
        const auto tail = make_tail("tau_J>n", counts[mask], samples.size());
        const double exact = iid_exact_survival(mu, j, n);
        const auto interval = clopper_pearson(tail.hits, tail.trials, 0.99);

        BoundReport r;
        r.name = "iid-survival";
        r.chain_id = chain.id;
        r.value = tail.p_hat;
        r.bound = exact;
        r.ci = 0.5 * (interval.upper - interval.lower);
        r.with("J", j.to_string('|')).with("n", std::to_string(n));
        r.with("cp_lower", interval.lower).with("cp_upper", interval.upper);
        r.holds = interval.lower - r.tolerance <= exact && exact <= interval.upper + r.tolerance;
        result.reports.push_back(std::move(r));

        auto maj = tail_report("iid-majorization", chain, mi, tail,
                               joint_survival_bound(iid_params, j));
        maj.chain_id = chain.id;
        maj.vacuous = false;
        maj.with("J", j.to_string('|')).with("n", std::to_string(n));
        maj.evaluate();
        result.reports.push_back(std::move(maj));
      }

      double mean = 0.0;
      for (const auto& s : samples) mean += s.value;
      mean /= static_cast<double>(samples.size());
      double var = 0.0;
      for (const auto& s : samples) var += (s.value - mean) * (s.value - mean);
      var /= static_cast<double>(samples.size() - 1);
      // Exact moments: E MM = sum mu_j (1-mu_j)^n and
      // E MM^2 = sum_{i,j} mu_i mu_j (1 - mu_i - mu_j [i != j])^n.
      const double nd = static_cast<double>(n);
      double exact_mean = 0.0, second = 0.0;
      for (std::size_t a = 0; a < m; ++a) {
        exact_mean += mu[a] * std::pow(1.0 - mu[a], nd);
        for (std::size_t b = 0; b < m; ++b) {
          const double miss = a == b ? 1.0 - mu[a] : std::max(0.0, 1.0 - mu[a] - mu[b]);
          second += mu[a] * mu[b] * std::pow(miss, nd);
        }
      }
      const double exact_var = std::max(0.0, second - exact_mean * exact_mean);
      const double n_trials = static_cast<double>(samples.size());

      BoundReport r;
      r.name = "iid-mm-mean";
      r.chain_id = chain.id;
      r.value = mean;
      r.bound = exact_mean;
      // The sample SE collapses to 0 when no symbol is ever missed, so the band uses
      // the exact standard error; the sample one is kept for reference.
      r.ci = 3.0 * std::sqrt(exact_var / n_trials);
      r.with("n", std::to_string(n)).with("band", "3se");
      r.with("se_exact", std::sqrt(exact_var / n_trials)).with("se_sample", std::sqrt(var / n_trials));
      r.holds = std::abs(mean - exact_mean) <= r.ci + 1e-12;
      result.reports.push_back(std::move(r));
    }
  }
  return result;
}

std::vector<SuiteResult> run_suite(const std::string& name, const VerifyOptions& options) {
  auto run_one = [](const std::string& suite, const VerifyOptions& o) {
    if (suite == "lemma1") return verify_lemma1(o);
    if (suite == "lemma2") return verify_lemma2(o);
    if (suite == "prop1") return verify_prop1(o);
    if (suite == "thm1") return verify_thm1(o);
    if (suite == "cor1") return verify_cor1(o);
    if (suite == "cor3") return verify_cor3(o);
    if (suite == "iid") return verify_iid(o);
    throw Error(ErrorKind::BadParams, "unknown verification suite '" + suite + "'");
  };
  if (name != "all") return {run_one(name, options)};
  std::vector<SuiteResult> out;
  const auto& names = suite_names();
  for (std::size_t k = 0; k < names.size(); ++k) {
    VerifyOptions o = options;
    o.seed = derive_seed(options.seed, k);
    out.push_back(run_one(names[k], o));
  }
  return out;
}

VerificationSummary summarize(const std::vector<SuiteResult>& results) {
  VerificationSummary summary;
  for (const auto& suite : results) {
    for (const auto& r : suite.reports) {
      auto& c = summary.counts[r.name];
      ++c.checks;
      if (r.vacuous)
        ++c.vacuous;
      else if (r.holds)
        ++c.passed;
      else
        ++c.failed;
      if (r.is_violation()) {
        std::string params;
        for (const auto& [k, v] : r.params) params += (params.empty() ? "" : ";") + k + "=" + v;
        summary.violations.push_back({r.name, r.chain_id, params, suite.seed});
      }
    }
  }
  return summary;
}

}  // namespace mml
