// mml: command-line front end for the missing-mass library.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mml/bounds.hpp"
#include "mml/chain.hpp"
#include "mml/chain_io.hpp"
#include "mml/config.hpp"
#include "mml/error.hpp"
#include "mml/hitting.hpp"
#include "mml/sim.hpp"
#include "mml/verify.hpp"
#include "output.hpp"

namespace mml::cli {
namespace {

constexpr const char* kVersion = "mml 0.1.0";

struct Globals {
  std::string in;
  std::string out;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string format = "csv";
  std::string config;
  std::string command_line;

  Format fmt() const { return format == "json" ? Format::Json : Format::Csv; }
};

std::size_t default_workers() {
  if (const char* env = std::getenv("MML_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Metadata base_meta(const Globals& g) {
  return {{"tool", kVersion}, {"generated", timestamp()}, {"command", g.command_line}};
}

ChainSpec load_chain(const Globals& g) {
  if (g.in.empty()) throw Error(ErrorKind::BadParams, "--in <chain.json> is required");
  return read_chain_file(g.in);
}

template <class T>
std::string render(const T& fn) {
  std::ostringstream buf;
  fn(buf);
  return buf.str();
}

void output_table(const Globals& g, const Table& t, Metadata meta) {
  emit(g.out, render([&](std::ostream& o) { write_table(o, t, meta, g.fmt()); }));
}

void output_reports(const Globals& g, const std::vector<BoundReport>& r, Metadata meta) {
  emit(g.out, render([&](std::ostream& o) { write_reports(o, r, meta, g.fmt()); }));
}

StateSet parse_set(const std::string& text, std::size_t m) {
  return StateSet::of(parse_index_list(text), m);
}

// ---------------------------------------------------------------- chain

struct ChainArgs {
  std::string family;
  std::size_t m = 0;
  std::string mu;
  double hold = 0.5, p = 0.0, q = 0.0, alpha = 1.0;
};

void chain_validate(const Globals& g) {
  const auto chain = load_chain(g);
  if (!is_irreducible(chain.matrix))
    throw Error(ErrorKind::NotIrreducible, g.in + ": chain is not irreducible");
  if (chain.start) validate_start(*chain.start, chain.matrix.size());
  Table t;
  t.columns = {"id", "m", "irreducible", "start"};
  t.add({chain.id, chain.matrix.size(), true, chain.start ? "given" : "stationary"});
  output_table(g, t, base_meta(g));
}

void chain_stationary(const Globals& g) {
  const auto chain = load_chain(g);
  const auto st = stationary(chain.matrix);
  Table t;
  t.columns = {"state", "label", "pi"};
  const auto& labels = chain.matrix.labels();
  for (std::size_t x = 0; x < st.pi.size(); ++x)
    t.add({x, x < labels.size() ? labels[x] : std::to_string(x), st.pi[x]});
  auto meta = base_meta(g);
  meta.emplace_back("residual", format_number(st.residual));
  meta.emplace_back("method", st.used_power_iteration ? "power-iteration" : "gaussian-elimination");
  output_table(g, t, meta);
}

void chain_generate(const Globals& g, const ChainArgs& a) {
  FamilyParams fp;
  fp.family = parse_family(a.family);
  fp.m = a.m;
  if (!a.mu.empty()) fp.mu = parse_double_list(a.mu);
  fp.hold = a.hold;
  fp.p = a.p;
  fp.q = a.q;
  fp.alpha = a.alpha;
  fp.seed = g.seed;
  emit(g.out, to_chain_json(generate(fp)) + "\n");
}

// ---------------------------------------------------------------- hit

struct HitArgs {
  std::string a, b;
  double eps = 0.5;
  bool heuristic = false;
};

void hit_table(const Globals& g, const HitArgs& h) {
  const auto chain = load_chain(g);
  const auto table = hitting_table(chain.matrix, parse_set(h.b, chain.matrix.size()));
  Table t;
  t.columns = {"state", "h"};
  for (std::size_t x = 0; x < table.h.size(); ++x) t.add({x, table.h[x]});
  auto meta = base_meta(g);
  meta.emplace_back("B", table.target.to_string(','));
  meta.emplace_back("t_plus_all", format_number(table.t_plus_all));
  meta.emplace_back("residual", format_number(table.residual));
  output_table(g, t, meta);
}

void hit_pair(const Globals& g, const HitArgs& h, bool plus) {
  const auto chain = load_chain(g);
  const std::size_t m = chain.matrix.size();
  const auto a = parse_set(h.a, m), b = parse_set(h.b, m);
  const double v = plus ? t_plus(chain.matrix, a, b) : t_minus(chain.matrix, a, b);
  Table t;
  t.columns = {"quantity", "A", "B", "value"};
  t.add({plus ? "t_plus" : "t_minus", a.to_string(','), b.to_string(','), v});
  output_table(g, t, base_meta(g));
}

void hit_tlarge(const Globals& g, const HitArgs& h) {
  const auto chain = load_chain(g);
  const auto pi = stationary(chain.matrix).pi;
  const auto r = h.heuristic ? t_large_upper(chain.matrix, pi, h.eps)
                             : t_large(chain.matrix, pi, h.eps);
  Table t;
  t.columns = {"epsilon", "value", "witness", "heuristic", "sets_examined"};
  t.add({r.epsilon, r.value, r.argmax_set.to_string(','), r.heuristic, r.sets_examined});
  output_table(g, t, base_meta(g));
}

void hit_lemma(const Globals& g, const HitArgs& h, int which) {
  const auto chain = load_chain(g);
  const std::size_t m = chain.matrix.size();
  const auto pi = stationary(chain.matrix).pi;
  auto r = which == 1 ? check_lemma1(chain.matrix, pi, parse_set(h.a, m), parse_set(h.b, m))
                      : check_lemma2(chain.matrix, pi, parse_set(h.a, m));
  r.chain_id = chain.id;
  output_reports(g, {r}, base_meta(g));
}

// ---------------------------------------------------------------- simulate

struct SimArgs {
  std::size_t n = 1;
  std::size_t trials = 10'000;
  std::string set;
  std::string thresholds;
  std::string s = "1";
  std::optional<std::size_t> start;
  std::string samples;
};

SimConfig sim_config(const Globals& g, const SimArgs& s, ChainSpec chain) {
  if (s.start) chain.start = point_mass(*s.start, chain.matrix.size());
  return SimConfig{std::move(chain), s.n, s.trials, g.seed, g.workers};
}

Metadata sim_meta(const Globals& g, const SimConfig& c) {
  auto meta = base_meta(g);
  meta.emplace_back("seed", std::to_string(g.seed));
  meta.emplace_back("chain", c.chain.id);
  meta.emplace_back("n", std::to_string(c.n));
  meta.emplace_back("trials", std::to_string(c.trials));
  return meta;
}

void sim_mm(const Globals& g, const SimArgs& s) {
  const auto config = sim_config(g, s, load_chain(g));
  const auto pi = stationary(config.chain.matrix).pi;
  const auto samples = sample_missing_mass(config, pi);
  double mean = 0.0;
  for (const auto& x : samples) mean += x.value;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (const auto& x : samples) var += (x.value - mean) * (x.value - mean);
  var = samples.size() > 1 ? var / static_cast<double>(samples.size() - 1) : 0.0;
  const double se = std::sqrt(var / static_cast<double>(samples.size()));
  if (!s.samples.empty())
    emit(s.samples, render([&](std::ostream& o) { write_samples_csv(o, samples); }));
  Table t;
  t.columns = {"n", "trials", "mean", "stddev", "se", "ci99"};
  t.add({config.n, samples.size(), mean, std::sqrt(var), se, kZ99 * se});
  output_table(g, t, sim_meta(g, config));
}

void sim_hittail(const Globals& g, const SimArgs& s) {
  const auto config = sim_config(g, s, load_chain(g));
  const auto b = parse_set(s.set, config.chain.matrix.size());
  std::vector<std::uint64_t> ts;
  for (auto v : parse_size_grid(s.thresholds)) ts.push_back(v);
  const auto r = empirical_hitting_tail(config, b, ts);
  Table t;
  t.columns = {"B", "t", "hits", "trials", "p_hat", "ci95", "ci99"};
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto& e = r.tails[k];
    t.add({b.to_string(','), ts[k], e.hits, e.trials, e.p_hat, e.ci95_halfwidth,
           e.half_width(kZ99)});
  }
  auto meta = sim_meta(g, config);
  meta.emplace_back("cap_hits", std::to_string(r.cap_hits));
  meta.emplace_back("mean_hitting_time", format_number(r.mean_hitting_time));
  output_table(g, t, meta);
}

void sim_jointtail(const Globals& g, const SimArgs& s) {
  const auto config = sim_config(g, s, load_chain(g));
  const auto j = parse_set(s.set, config.chain.matrix.size());
  const auto e = empirical_joint_survival(config, j);
  Table t;
  t.columns = {"J", "n", "hits", "trials", "p_hat", "ci95", "ci99"};
  t.add({j.to_string(','), config.n, e.hits, e.trials, e.p_hat, e.ci95_halfwidth,
         e.half_width(kZ99)});
  output_table(g, t, sim_meta(g, config));
}

void sim_mgf(const Globals& g, const SimArgs& s) {
  const auto config = sim_config(g, s, load_chain(g));
  const auto pi = stationary(config.chain.matrix).pi;
  const auto samples = sample_missing_mass(config, pi);
  const double root_n = std::sqrt(static_cast<double>(samples.size()));
  Table t;
  t.columns = {"s", "n", "mgf", "se", "ci99"};
  for (double sv : parse_double_list(s.s)) {
    const double se = empirical_mgf_stddev(samples, sv) / root_n;
    t.add({sv, config.n, empirical_mgf(samples, sv), se, kZ99 * se});
  }
  output_table(g, t, sim_meta(g, config));
}

// ---------------------------------------------------------------- bounds

struct BoundArgs {
  std::string set;
  std::size_t n = 1;
  std::optional<double> t_half;
  double c = kDefaultC;
  double c2 = kDefaultC2;
  double eps = 0.5;
  double level = 0.5;
  bool iid = false;
  std::string t = "0";
  std::optional<double> expected;
  std::optional<std::size_t> start;
  std::string s = "1";
  double p = 0.5, q = 0.5;
  std::size_t trials = 100'000;
};

BoundParams bound_params(const ChainSpec& chain, const BoundArgs& a, std::vector<double> pi) {
  BoundParams bp;
  bp.c = a.c;
  bp.n = a.n;
  bp.iid_mode = a.iid;
  bp.t_half = a.t_half ? *a.t_half : t_large(chain.matrix, pi, a.level).value;
  bp.pi = std::move(pi);
  bp.validate();
  return bp;
}

Metadata bound_meta(const Globals& g, const BoundParams& bp) {
  auto meta = base_meta(g);
  meta.emplace_back("c", format_number(bp.c));
  meta.emplace_back("T", format_number(bp.t_half));
  meta.emplace_back("n", std::to_string(bp.n));
  meta.emplace_back("iid_mode", bp.iid_mode ? "true" : "false");
  return meta;
}

void bounds_q(const Globals& g, const BoundArgs& a) {
  const auto chain = load_chain(g);
  const auto bp = bound_params(chain, a, stationary(chain.matrix).pi);
  const auto q = q_probabilities(bp);
  Table t;
  t.columns = {"state", "pi", "q"};
  for (std::size_t x = 0; x < q.size(); ++x) t.add({x, bp.pi[x], q[x]});
  output_table(g, t, bound_meta(g, bp));
}

void bounds_joint(const Globals& g, const BoundArgs& a) {
  const auto chain = load_chain(g);
  const auto bp = bound_params(chain, a, stationary(chain.matrix).pi);
  const auto j = parse_set(a.set, chain.matrix.size());
  Table t;
  t.columns = {"J", "n", "pi_J", "bound", "iid_exact"};
  t.add({j.to_string(','), bp.n, j.mass(bp.pi), joint_survival_bound(bp, j),
         iid_exact_survival(bp.pi, j, bp.n)});
  output_table(g, t, bound_meta(g, bp));
}

void bounds_prop1(const Globals& g, const BoundArgs& a) {
  double expected = 0.0;
  std::string origin = "given";
  if (a.expected) {
    expected = *a.expected;
  } else {
    const auto chain = load_chain(g);
    const std::size_t m = chain.matrix.size();
    const auto b = parse_set(a.set, m);
    const auto law = a.start ? point_mass(*a.start, m) : initial_law(chain);
    expected = expected_first_entry_time(chain.matrix, law, b);
    origin = "B=" + b.to_string(',');
  }
  Table t;
  t.columns = {"t", "expected", "bound"};
  for (auto tv : parse_size_grid(a.t)) t.add({tv, expected, hitting_tail_bound(expected, tv)});
  auto meta = base_meta(g);
  meta.emplace_back("expected_from", origin);
  output_table(g, t, meta);
}

void bounds_cor3(const Globals& g, const BoundArgs& a) {
  const auto chain = load_chain(g);
  const auto pi = stationary(chain.matrix).pi;
  const auto set = parse_set(a.set, chain.matrix.size());
  const double t_half = a.t_half ? *a.t_half : t_large(chain.matrix, pi, a.level).value;
  Table t;
  t.columns = {"A", "t", "pi_A", "T", "c", "bound"};
  for (auto tv : parse_size_grid(a.t))
    t.add({set.to_string(','), tv, set.mass(pi), t_half, a.c,
           explicit_hitting_tail(set.mass(pi), t_half, tv, a.c)});
  output_table(g, t, base_meta(g));
}

void bounds_mmtail(const Globals& g, const BoundArgs& a) {
  const auto chain = load_chain(g);
  const auto bp = bound_params(chain, a, stationary(chain.matrix).pi);
  const auto r = missing_mass_tail_bound(bp, a.eps, a.c2);
  Table t;
  t.columns = {"eps", "mean_term", "threshold", "failure_bound", "c2"};
  t.add({a.eps, r.mean_term, r.threshold, r.failure_bound, r.c2});
  auto meta = bound_meta(g, bp);
  meta.emplace_back("side", "upper only; the lower tail is out of scope");
  output_table(g, t, meta);
}

void bounds_mgf(const Globals& g, const BoundArgs& a) {
  const auto chain = load_chain(g);
  const auto bp = bound_params(chain, a, stationary(chain.matrix).pi);
  Table t;
  t.columns = {"s", "form", "bound"};
  for (double s : parse_double_list(a.s))
    for (auto form : {MgfForm::Eq3, MgfForm::Cor1})
      t.add({s, to_string(form), bernoulli_product_mgf(bp, form, s)});
  output_table(g, t, bound_meta(g, bp));
}

void bounds_kl(const Globals& g, const BoundArgs& a) {
  output_reports(g, {pinsker_check(a.p, a.q)}, base_meta(g));
}

void bounds_calibrate(const Globals& g, const BoundArgs& a, const std::vector<ChainSpec>& chains) {
  CalibrationOptions opts;
  opts.trials = a.trials;
  opts.master_seed = g.seed;
  opts.workers = g.workers;
  const auto suite = chains.empty() ? family_suite(g.seed) : chains;
  const auto cal = calibrate_c(suite, opts);
  Table t;
  t.columns = {"chain_id", "J", "n", "pi_J", "T", "hits", "trials", "tight_c", "binding"};
  for (std::size_t k = 0; k < cal.instances.size(); ++k) {
    const auto& inst = cal.instances[k];
    t.add({inst.chain_id, inst.j.to_string(','), inst.n, inst.pi_j, inst.t_half, inst.tail.hits,
           inst.tail.trials, std::isinf(inst.tight_c) ? nlohmann::json("inf") : nlohmann::json(inst.tight_c),
           k == cal.binding});
  }
  auto meta = base_meta(g);
  meta.emplace_back("seed", std::to_string(g.seed));
  meta.emplace_back("certified_c", format_number(cal.c));
  meta.emplace_back("resolution", format_number(cal.resolution));
  output_table(g, t, meta);
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite;
  std::optional<std::size_t> random_chains, m_max, max_pairs, trials, prop1_trials;
  std::optional<double> c, c2, eps;
  std::string n, m, cor1_eps, s;
  std::string summary;
};

nlohmann::json summary_json(const VerificationSummary& s, const VerifyOptions& o) {
  nlohmann::json doc;
  doc["ok"] = s.ok();
  doc["seed"] = o.seed;
  doc["constants"] = {{"c", o.c}, {"c2", o.c2}, {"epsilon", o.epsilon}};
  for (const auto& [name, c] : s.counts)
    doc["counts"][name] = {
        {"checks", c.checks}, {"passed", c.passed}, {"failed", c.failed}, {"vacuous", c.vacuous}};
  doc["violations"] = nlohmann::json::array();
  for (const auto& v : s.violations)
    doc["violations"].push_back(
        {{"name", v.name}, {"chain", v.chain_id}, {"params", v.params}, {"seed", v.seed}});
  return doc;
}

int run_verify(const Globals& g, const VerifyArgs& a, const std::optional<ExperimentConfig>& cfg) {
  VerifyOptions o;
  o.seed = g.seed;
  o.workers = g.workers;
  if (cfg) cfg->apply(o);
  if (a.random_chains) {
    o.lemma1_chains = *a.random_chains;
    o.lemma2_chains = *a.random_chains;
    o.prop1_chains = *a.random_chains;
  }
  if (a.m_max) {
    o.lemma1_m_max = *a.m_max;
    o.lemma2_m_max = *a.m_max;
  }
  if (a.max_pairs) o.lemma1_max_pairs = *a.max_pairs;
  if (a.trials) o.trials = *a.trials;
  if (a.prop1_trials) o.prop1_trials = *a.prop1_trials;
  if (a.c) o.c = *a.c;
  if (a.c2) o.c2 = *a.c2;
  if (a.eps) o.epsilon = *a.eps;
  if (!a.n.empty()) o.n_grid = o.iid_n = parse_size_grid(a.n);
  if (!a.m.empty()) o.iid_m = parse_size_grid(a.m);
  if (!a.cor1_eps.empty()) o.cor1_eps = parse_double_list(a.cor1_eps);
  if (!a.s.empty()) o.mgf_s = parse_double_list(a.s);
  if (o.trials == 0 || o.prop1_trials == 0)
    throw Error(ErrorKind::BadParams, "trial counts must be positive");

  const auto results = run_suite(a.suite, o);
  std::vector<BoundReport> rows;
  for (const auto& r : results) rows.insert(rows.end(), r.reports.begin(), r.reports.end());
  const auto summary = summarize(results);

  auto meta = base_meta(g);
  meta.emplace_back("suite", a.suite);
  meta.emplace_back("seed", std::to_string(o.seed));
  meta.emplace_back("c", format_number(o.c));
  meta.emplace_back("c2", format_number(o.c2));
  meta.emplace_back("epsilon", format_number(o.epsilon));
  meta.emplace_back("trials", std::to_string(o.trials));

  std::string out_path = g.out;
  std::string summary_path = a.summary;
  if (cfg && !cfg->output_dir.empty()) {
    std::filesystem::create_directories(cfg->output_dir);
    const auto dir = std::filesystem::path(cfg->output_dir);
    if (out_path.empty()) out_path = (dir / ("verify-" + a.suite + ".csv")).string();
    if (summary_path.empty()) summary_path = (dir / ("summary-" + a.suite + ".json")).string();
  }
  emit(out_path, render([&](std::ostream& os) { write_reports(os, rows, meta, g.fmt()); }));

  const auto doc = summary_json(summary, o);
  if (!summary_path.empty()) emit(summary_path, doc.dump(2) + "\n");
  // Human summary goes to stderr when the report occupies stdout.
  std::ostream& human = (out_path.empty() || out_path == "-") ? std::cerr : std::cout;
  for (const auto& [name, c] : summary.counts)
    human << name << ": " << c.checks << " checks, " << c.passed << " passed, " << c.failed
          << " failed, " << c.vacuous << " vacuous\n";
  human << "violations: " << summary.violations.size() << "\n";
  for (const auto& v : summary.violations)
    human << "  " << v.name << " chain=" << v.chain_id << " " << v.params << " seed=" << v.seed
          << "\n";
  return summary.ok() ? 0 : 1;
}

// ---------------------------------------------------------------- main

int run(int argc, char** argv) {
  CLI::App app{"Markov-chain missing-mass analysis: hitting times, simulation, bounds"};
  app.set_version_flag("--version", kVersion);
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  g.workers = default_workers();
  for (int i = 0; i < argc; ++i) g.command_line += (i ? " " : "") + std::string(argv[i]);
  app.add_option("--in", g.in, "Chain-spec JSON file");
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--workers", g.workers, "Worker threads (default $MML_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", g.config, "Experiment config JSON");

  std::function<int()> action;
  auto bind = [&](CLI::App* sub, std::function<int()> fn) {
    sub->callback([&action, fn] { action = fn; });
  };
  auto done = [](auto fn) {
    return [fn] {
      fn();
      return 0;
    };
  };

  // chain
  auto* chain = app.add_subcommand("chain", "Validate, solve or generate chains");
  chain->require_subcommand(1);
  ChainArgs ca;
  bind(chain->add_subcommand("validate", "Check a chain-spec file"),
       done([&] { chain_validate(g); }));
  bind(chain->add_subcommand("stationary", "Stationary distribution"),
       done([&] { chain_stationary(g); }));
  auto* gen = chain->add_subcommand("generate", "Write a chain from a named family");
  gen->add_option("--family", ca.family, "iid|lazy-cycle|birth-death|random-dense|two-state")
      ->required();
  gen->add_option("--m", ca.m, "State count");
  gen->add_option("--mu", ca.mu, "iid law, comma separated");
  gen->add_option("--hold", ca.hold, "lazy-cycle holding probability");
  gen->add_option("--p", ca.p, "birth-death up / two-state 0->1");
  gen->add_option("--q", ca.q, "birth-death down / two-state 1->0");
  gen->add_option("--alpha", ca.alpha, "random-dense Dirichlet concentration");
  bind(gen, done([&] { chain_generate(g, ca); }));

  // hit
  auto* hit = app.add_subcommand("hit", "Exact hitting-time quantities");
  hit->require_subcommand(1);
  HitArgs ha;
  auto* table = hit->add_subcommand("table", "Expected hitting times of B from every state");
  table->add_option("--B", ha.b, "Target set")->required();
  bind(table, done([&] { hit_table(g, ha); }));
  for (const char* name : {"tplus", "tminus"}) {
    const bool plus = std::string(name) == "tplus";
    auto* sub = hit->add_subcommand(name, plus ? "max_{x in A} E_x N_B" : "min_{x in A} E_x N_B");
    sub->add_option("--A", ha.a, "Start set")->required();
    sub->add_option("--B", ha.b, "Target set")->required();
    bind(sub, done([&, plus] { hit_pair(g, ha, plus); }));
  }
  auto* tl = hit->add_subcommand("tlarge", "Maximum hitting time of sets of mass >= eps");
  tl->add_option("--eps", ha.eps, "Mass level in (0,1]");
  tl->add_flag("--heuristic", ha.heuristic, "Allow the heuristic upper estimate for m > 20");
  bind(tl, done([&] { hit_tlarge(g, ha); }));
  auto* l1 = hit->add_subcommand("lemma1", "pi(A) <= T+(A,B) / (T+(A,B) + T-(B,A))");
  l1->add_option("--A", ha.a)->required();
  l1->add_option("--B", ha.b)->required();
  bind(l1, done([&] { hit_lemma(g, ha, 1); }));
  auto* l2 = hit->add_subcommand("lemma2", "T(A) <= 2 T(0.5) / pi(A)");
  l2->add_option("--A", ha.a)->required();
  bind(l2, done([&] { hit_lemma(g, ha, 2); }));

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimates");
  sim->require_subcommand(1);
  SimArgs sa;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", sa.n, "Trajectory length");
    sub->add_option("--trials", sa.trials, "Number of trajectories")->check(CLI::PositiveNumber);
    sub->add_option("--start", sa.start, "Start from this state instead of the chain's law");
  };
  auto* mm = sim->add_subcommand("mm", "Missing-mass mean");
  add_common(mm);
  mm->add_option("--samples", sa.samples, "Also write per-trial samples to this CSV");
  bind(mm, done([&] { sim_mm(g, sa); }));
  auto* ht = sim->add_subcommand("hittail", "Pr[N_B > t]");
  add_common(ht);
  ht->add_option("--B", sa.set, "Target set")->required();
  ht->add_option("--t", sa.thresholds, "Thresholds, e.g. 0..10,20")->required();
  bind(ht, done([&] { sim_hittail(g, sa); }));
  auto* jt = sim->add_subcommand("jointtail", "Pr[J unvisited in n steps]");
  add_common(jt);
  jt->add_option("--J", sa.set, "Set J")->required();
  bind(jt, done([&] { sim_jointtail(g, sa); }));
  auto* mg = sim->add_subcommand("mgf", "E exp(s * missing mass)");
  add_common(mg);
  mg->add_option("--s", sa.s, "Comma-separated s values");
  bind(mg, done([&] { sim_mgf(g, sa); }));

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Direct bound evaluators");
  bnd->require_subcommand(1);
  BoundArgs ba;
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--n", ba.n, "Sample size");
    sub->add_option("--T", ba.t_half, "Override T (default exact T(level))");
    sub->add_option("--level", ba.level, "Mass level for T");
    sub->add_option("--c", ba.c, "Rate constant c");
    sub->add_flag("--iid", ba.iid, "Use exact IID q_j = (1 - pi_j)^n");
  };
  auto* bq = bnd->add_subcommand("q", "Per-state q_j");
  add_params(bq);
  bind(bq, done([&] { bounds_q(g, ba); }));
  auto* bj = bnd->add_subcommand("joint", "exp(-c n pi(J) / T)");
  add_params(bj);
  bj->add_option("--J", ba.set)->required();
  bind(bj, done([&] { bounds_joint(g, ba); }));
  auto* bp1 = bnd->add_subcommand("prop1", "exp(-floor(t / ceil(e E N_B)))");
  bp1->add_option("--t", ba.t, "Thresholds")->required();
  bp1->add_option("--expected", ba.expected, "E N_B; otherwise solved from --in/--B");
  bp1->add_option("--B", ba.set, "Target set");
  bp1->add_option("--start", ba.start, "Start state (default chain law)");
  bind(bp1, done([&] { bounds_prop1(g, ba); }));
  auto* bc3 = bnd->add_subcommand("cor3", "exp(-c pi(A) t / T)");
  bc3->add_option("--A", ba.set)->required();
  bc3->add_option("--t", ba.t, "Thresholds")->required();
  bc3->add_option("--T", ba.t_half);
  bc3->add_option("--level", ba.level);
  bc3->add_option("--c", ba.c);
  bind(bc3, done([&] { bounds_cor3(g, ba); }));
  auto* bmt = bnd->add_subcommand("mmtail", "Missing-mass upper tail");
  add_params(bmt);
  bmt->add_option("--eps", ba.eps);
  bmt->add_option("--c2", ba.c2);
  bind(bmt, done([&] { bounds_mmtail(g, ba); }));
  auto* bmg = bnd->add_subcommand("mgf", "Bernoulli-product MGF comparators");
  add_params(bmg);
  bmg->add_option("--s", ba.s);
  bind(bmg, done([&] { bounds_mgf(g, ba); }));
  auto* bkl = bnd->add_subcommand("kl", "KL divergence and the Pinsker check");
  bkl->add_option("--p", ba.p);
  bkl->add_option("--q", ba.q);
  bind(bkl, done([&] { bounds_kl(g, ba); }));
  auto* bcal = bnd->add_subcommand("calibrate", "Largest c certified on a chain suite");
  bcal->add_option("--trials", ba.trials)->check(CLI::PositiveNumber);
  std::optional<ExperimentConfig> cfg;
  bind(bcal, done([&] { bounds_calibrate(g, ba, cfg ? cfg->chains : std::vector<ChainSpec>{}); }));

  // verify
  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Run a property suite");
  ver->add_option("suite", va.suite, "lemma1|lemma2|prop1|thm1|cor1|cor3|iid|all")
      ->required()
      ->check(CLI::IsMember({"lemma1", "lemma2", "prop1", "thm1", "cor1", "cor3", "iid", "all"}));
  ver->add_option("--random-chains", va.random_chains, "Chains in random sweeps");
  ver->add_option("--m-max", va.m_max, "Largest state count in random sweeps");
  ver->add_option("--max-pairs", va.max_pairs, "Lemma 1 pairs per chain");
  ver->add_option("--trials", va.trials, "Trials per simulated point");
  ver->add_option("--prop1-trials", va.prop1_trials, "Trials per hitting-tail point");
  ver->add_option("--c", va.c, "Rate constant c");
  ver->add_option("--c2", va.c2, "Tail constant c2");
  ver->add_option("--eps", va.eps, "Mass level for T");
  ver->add_option("--n", va.n, "n grid, e.g. 1,2,4 or 1..64");
  ver->add_option("--m", va.m, "IID state counts");
  ver->add_option("--cor1-eps", va.cor1_eps, "Deviation levels for the tail suite");
  ver->add_option("--s", va.s, "MGF arguments");
  ver->add_option("--summary", va.summary, "Write the JSON summary here");
  bind(ver, [&] { return run_verify(g, va, cfg); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (!g.config.empty()) {
    cfg = read_experiment_config(g.config);
    if (cfg->master_seed && app.count("--seed") == 0) g.seed = *cfg->master_seed;
  }
  if (!action) {
    std::cerr << app.help();
    return 2;
  }
  return action();
}

}  // namespace
}  // namespace mml::cli

int main(int argc, char** argv) {
  try {
    return mml::cli::run(argc, argv);
  } catch (const mml::Error& e) {
    std::cerr << "mml: " << mml::to_string(e.kind()) << ": " << e.what() << "\n";
    return mml::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "mml: " << e.what() << "\n";
    return 4;
  }
}
