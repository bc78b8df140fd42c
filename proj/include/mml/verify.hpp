#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mml/bounds.hpp"
#include "mml/chain.hpp"
#include "mml/report.hpp"

namespace mml {

/// Knobs shared by the verification suites. Defaults reproduce the
/// acceptance configuration.
struct VerifyOptions {
  std::uint64_t seed = 1;
  std::size_t workers = 1;

  // Lemma 1 sweep.
  std::size_t lemma1_chains = 200;
  std::size_t lemma1_m_max = 8;
  std::size_t lemma1_max_pairs = 500;

  // Lemma 2 sweep.
  std::size_t lemma2_chains = 50;
  std::size_t lemma2_m_max = 10;

  // Simulation suites.
  std::size_t trials = 100'000;
  /// Trials per (chain, B) in the hitting-tail suite.
  std::size_t prop1_trials = 20'000;
  std::size_t prop1_chains = 20;
  double c = kDefaultC;
  double c2 = kDefaultC2;
  /// Level of the large-set hitting time used as T.
  double epsilon = 0.5;
  std::vector<std::size_t> n_grid{1, 2, 4, 8, 16, 32, 64, 128, 256};
  std::vector<double> cor1_eps{0.05, 0.1, 0.2, 0.3};
  std::vector<double> mgf_s{0.5, 1.0, 2.0};

  // IID suite.
  std::vector<std::size_t> iid_m{2, 4, 8};
  std::vector<std::size_t> iid_n{1, 2, 4, 8, 16, 32, 64};
  std::size_t iid_random_sets = 20;

  /// Replaces the built-in chain suite when non-empty.
  std::vector<ChainSpec> chains;
  /// Replaces the generated target / J families when non-empty.
  std::vector<std::vector<std::size_t>> sets;
};

struct Violation {
  std::string name;
  std::string chain_id;
  std::string params;
  std::uint64_t seed = 0;
};

struct CheckCounts {
  std::size_t checks = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t vacuous = 0;
};

struct VerificationSummary {
  std::map<std::string, CheckCounts> counts;
  /// One entry per report with holds = false and vacuous = false.
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

struct SuiteResult {
  std::string suite;
  std::vector<BoundReport> reports;
  std::uint64_t seed = 0;
};

/// Names accepted by run_suite, in the order `all` runs them.
const std::vector<std::string>& suite_names();

/// The chains used by the simulation suites when none are configured:
/// lazy cycles (m = 5, 10), a birth-death chain (m = 8) and random chains.
std::vector<ChainSpec> family_suite(std::uint64_t seed);

/// Twenty chains for the hitting-tail suite: the family suite, a two-state
/// chain, an IID chain and random chains.
std::vector<ChainSpec> prop1_suite(std::uint64_t seed, std::size_t count);

SuiteResult verify_lemma1(const VerifyOptions& options);
SuiteResult verify_lemma2(const VerifyOptions& options);
SuiteResult verify_prop1(const VerifyOptions& options);
/// Joint-survival majorization, MGF domination in both comparator forms and
/// the calibrated constant (informational rows named "calibrated-c").
SuiteResult verify_thm1(const VerifyOptions& options);
SuiteResult verify_cor1(const VerifyOptions& options);
SuiteResult verify_cor3(const VerifyOptions& options);
SuiteResult verify_iid(const VerifyOptions& options);

/// Runs one suite by name; "all" runs every suite in fixed order, each with
/// seed derive_seed(options.seed, position). Throws BadParams for unknown names.
std::vector<SuiteResult> run_suite(const std::string& name, const VerifyOptions& options);

VerificationSummary summarize(const std::vector<SuiteResult>& results);

}  // namespace mml
