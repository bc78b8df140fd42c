#include "mml/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "mml/error.hpp"
#include "mml/hitting.hpp"

namespace mml {

void BoundParams::validate() const {
  if (!(c > 0.0)) throw Error(ErrorKind::BadParams, "c must be positive");
  if (!(t_half >= 0.0)) throw Error(ErrorKind::BadParams, "T must be nonnegative");
  if (t_half == 0.0 && pi.size() != 1)
    throw Error(ErrorKind::BadParams, "T = 0 is only admissible for a single-state chain");
  if (n < 1) throw Error(ErrorKind::BadParams, "n must be >= 1");
  if (pi.empty()) throw Error(ErrorKind::BadParams, "pi is empty");
}

std::vector<double> q_probabilities(const BoundParams& params) {
  params.validate();
  std::vector<double> q(params.pi.size());
  const auto n = static_cast<double>(params.n);
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (params.iid_mode)
      q[j] = std::pow(std::clamp(1.0 - params.pi[j], 0.0, 1.0), n);
    else if (params.vacuous())
      q[j] = 0.0;
    else
      q[j] = std::exp(-params.c * n * params.pi[j] / params.t_half);
  }
  return q;
}

double joint_survival_bound(const BoundParams& params, const StateSet& j) {
  if (j.empty()) throw Error(ErrorKind::EmptySet, "set J is empty");
  params.validate();
  const auto n = static_cast<double>(params.n);
  if (params.iid_mode) {
    double log_sum = 0.0;
    for (auto x : j.members()) log_sum += n * std::log1p(-std::min(params.pi[x], 1.0));
    return std::exp(log_sum);
  }
  if (params.vacuous()) return 0.0;
  return std::exp(-params.c * n * j.mass(params.pi) / params.t_half);
}

double iid_exact_survival(std::span<const double> pi, const StateSet& j, std::size_t n) {
  const double base = std::clamp(1.0 - j.mass(pi), 0.0, 1.0);
  return std::pow(base, static_cast<double>(n));
}

BoundReport product_inequality_check(std::span<const double> pi, const StateSet& j) {
  if (j.empty()) throw Error(ErrorKind::EmptySet, "set J is empty");
  double product = 1.0;
  for (auto x : j.members()) product *= 1.0 - pi[x];
  BoundReport r;
  r.name = "product-inequality";
  r.value = 1.0 - j.mass(pi);
  r.bound = product;
  r.with("J", j.to_string('|'));
  r.evaluate();
  return r;
}

double hitting_tail_bound(double expected, std::uint64_t t) {
  if (!(expected > 0.0) || !std::isfinite(expected))
    throw Error(ErrorKind::DomainError, "expected hitting time must be positive and finite");
  const double chunk = std::ceil(std::numbers::e * expected);
  const double chunks = std::floor(static_cast<double>(t) / chunk);
  return std::min(1.0, std::exp(-chunks));
}

double explicit_hitting_tail(double pi_a, double t_half, std::uint64_t t, double c_explicit) {
  if (!(pi_a > 0.0 && pi_a <= 1.0 + 1e-12))
    throw Error(ErrorKind::DomainError, "pi(A) must lie in (0, 1]");
  if (!(t_half > 0.0)) throw Error(ErrorKind::DomainError, "T(0.5) must be positive");
  if (!(c_explicit > 0.0)) throw Error(ErrorKind::DomainError, "c must be positive");
  return std::min(1.0, std::exp(-c_explicit * static_cast<double>(t) * pi_a / t_half));
}

MissingMassTail missing_mass_tail_bound(const BoundParams& params, double epsilon, double c2) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::DomainError, "epsilon must be positive");
  if (!(c2 > 0.0)) throw Error(ErrorKind::BadParams, "c2 must be positive");
  const auto q = q_probabilities(params);
  MissingMassTail out;
  out.c2 = c2;
  for (std::size_t j = 0; j < q.size(); ++j) out.mean_term += params.pi[j] * q[j];
  out.threshold = out.mean_term + epsilon;
  // A single-state chain has no missing mass, so nothing can fail.
  out.failure_bound =
      params.vacuous()
          ? 0.0
          : std::exp(-c2 * static_cast<double>(params.n) * epsilon * epsilon / params.t_half);
  return out;
}

std::string to_string(MgfForm form) { return form == MgfForm::Eq3 ? "eq3-form" : "cor1-form"; }

double bernoulli_product_log_mgf(std::span<const double> q, std::span<const double> weights,
                                 double s) {
  double total = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double x = s * weights[j];
    // log(1 - q + q e^x), arranged to stay finite for large x.
    if (x > 0.0)
      total += x + std::log(q[j] + (1.0 - q[j]) * std::exp(-x));
    else
      total += std::log1p(q[j] * std::expm1(x));
  }
  return total;
}

double bernoulli_product_mgf(const BoundParams& params, MgfForm form, double s) {
  const auto q = q_probabilities(params);
  std::vector<double> w(params.pi);
  if (form == MgfForm::Eq3)
    for (auto& v : w) v *= static_cast<double>(params.n);
  return std::exp(bernoulli_product_log_mgf(q, w, s));
}

double kl_divergence(double p, double q) {
  if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0))
    throw Error(ErrorKind::DomainError, "kl_divergence needs p, q in (0, 1)");
  return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

BoundReport pinsker_check(double p, double q) {
  const double d = kl_divergence(p, q);
  BoundReport r;
  r.name = "pinsker";
  // Reported as 2(p-q)^2 <= D so the common value <= bound convention holds.
  r.value = 2.0 * (p - q) * (p - q);
  r.bound = d;
  r.tolerance = 1e-12;
  r.with("p", p).with("q", q);
  r.evaluate();
  return r;
}

double tight_c(const EmpiricalTail& tail, std::size_t n, double pi_j, double t_half) {
  if (tail.hits == 0 || t_half == 0.0) return std::numeric_limits<double>::infinity();
  const double upper = tail.p_hat + tail.half_width(kZ99);
  if (upper >= 1.0) return 0.0;
  return -std::log(upper) * t_half / (static_cast<double>(n) * pi_j);
}

Calibration certify_c(std::vector<CalibrationInstance> instances, double resolution) {
  if (instances.empty()) throw Error(ErrorKind::BadParams, "calibration suite is empty");
  if (!(resolution > 0.0)) throw Error(ErrorKind::BadParams, "resolution must be positive");
  Calibration out;
  out.resolution = resolution;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto& inst = instances[i];
    inst.tight_c = tight_c(inst.tail, inst.n, inst.pi_j, inst.t_half);
    if (inst.tight_c < best) {
      best = inst.tight_c;
      out.binding = i;
    }
  }
  if (!std::isfinite(best))
    throw Error(ErrorKind::InsufficientTrials,
                "no instance observed a survival event; c cannot be resolved");
  out.c = std::floor(best / resolution) * resolution;
  out.instances = std::move(instances);
  return out;
}

Calibration calibrate_c(std::span<const ChainSpec> suite, const CalibrationOptions& options) {
  if (suite.empty()) throw Error(ErrorKind::BadParams, "calibration suite is empty");
  std::vector<CalibrationInstance> instances;
  for (std::size_t ci = 0; ci < suite.size(); ++ci) {
    const auto& chain = suite[ci];
    const std::size_t m = chain.matrix.size();
    const auto pi = stationary(chain.matrix).pi;
    const double t_half = t_large(chain.matrix, pi, 0.5).value;
    if (t_half == 0.0) continue;

    std::vector<std::uint64_t> masks;
    if (m <= options.exhaustive_j_max_m) {
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) masks.push_back(mask);
    } else {
      for (std::size_t x = 0; x < m; ++x) masks.push_back(std::uint64_t{1} << x);
    }

    for (std::size_t ni = 0; ni < options.n_grid.size(); ++ni) {
      const std::size_t n = options.n_grid[ni];
      if (static_cast<double>(n) < t_half) continue;
      SimConfig config{chain, n, options.trials,
                       derive_seed(derive_seed(options.master_seed, ci), ni), options.workers};
      const auto samples = sample_missing_mass(config, pi);
      const auto counts = unseen_superset_counts(samples, m);
      for (auto mask : masks) {
        CalibrationInstance inst;
        inst.chain_id = chain.id;
        inst.j = StateSet::from_mask(mask, m);
        inst.n = n;
        inst.pi_j = inst.j.mass(pi);
        inst.t_half = t_half;
        inst.tail = make_tail("tau_J>n;J=" + inst.j.to_string('|') + ";n=" + std::to_string(n),
                              counts[mask], samples.size());
        instances.push_back(std::move(inst));
      }
    }
  }
  if (instances.empty())
    throw Error(ErrorKind::BadParams, "no (chain, J, n) instance passes the n >= T(0.5) filter");
  return certify_c(std::move(instances), options.resolution);
}

}  // namespace mml
