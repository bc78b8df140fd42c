#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mml/chain.hpp"
#include "mml/report.hpp"
#include "mml/sim.hpp"
#include "mml/state_set.hpp"

namespace mml {

/// Rate of the hitting-time tail (1/e) composed with the factor 2 relating
/// T(A) to T(0.5) / pi(A).
inline constexpr double kDefaultC = 1.0 / (2.0 * std::numbers::e);
/// Constant of the missing-mass upper tail; its true value is unknown.
inline constexpr double kDefaultC2 = 1.0;

struct BoundParams {
  double c = kDefaultC;
  /// Hitting time of large sets, T(0.5). Zero only for single-state chains.
  double t_half = 1.0;
  std::size_t n = 1;
  std::vector<double> pi;
  /// Use the exact IID survival (1 - pi(j))^n in place of exp(-c n pi(j) / T).
  bool iid_mode = false;

  /// Throws BadParams unless c > 0, T >= 0 (T = 0 only when m = 1) and n >= 1.
  void validate() const;
  /// True for m = 1, where every bound is vacuous.
  bool vacuous() const { return t_half == 0.0; }
};

/// q_j = exp(-c n pi(j) / T), or (1 - pi(j))^n in IID mode.
std::vector<double> q_probabilities(const BoundParams& params);

/// prod_{j in J} q_j, evaluated as exp(-c n pi(J) / T).
double joint_survival_bound(const BoundParams& params, const StateSet& j);

/// (1 - pi(J))^n, the exact survival of an IID source.
double iid_exact_survival(std::span<const double> pi, const StateSet& j, std::size_t n);

/// 1 - pi(J) <= prod_{j in J} (1 - pi(j)).
BoundReport product_inequality_check(std::span<const double> pi, const StateSet& j);

/// exp(-floor(t / ceil(e * expected))), clamped to at most 1.
double hitting_tail_bound(double expected, std::uint64_t t);

/// exp(-c t pi(A) / T(0.5)), clamped to at most 1.
double explicit_hitting_tail(double pi_a, double t_half, std::uint64_t t,
                             double c_explicit = kDefaultC);

struct MissingMassTail {
  /// sum_j pi(j) q_j.
  double mean_term = 0.0;
  /// mean_term + epsilon.
  double threshold = 0.0;
  /// exp(-c2 n epsilon^2 / T).
  double failure_bound = 1.0;
  double c2 = kDefaultC2;
};

MissingMassTail missing_mass_tail_bound(const BoundParams& params, double epsilon,
                                        double c2 = kDefaultC2);

/// Comparator weights for the Bernoulli surrogate sum_j w_j Q_j.
enum class MgfForm {
  /// w_j = n pi(j).
  Eq3,
  /// w_j = pi(j), the normalization of the missing mass itself.
  Cor1,
};

std::string to_string(MgfForm form);

/// log E exp(s sum_j w_j Q_j) = sum_j log(1 - q_j + q_j e^{s w_j}).
double bernoulli_product_log_mgf(std::span<const double> q, std::span<const double> weights,
                                 double s);

/// Bernoulli-product MGF for the given comparator form.
double bernoulli_product_mgf(const BoundParams& params, MgfForm form, double s);

/// Binary relative entropy D(p || q) in nats. Throws DomainError unless p, q in (0, 1).
double kl_divergence(double p, double q);

/// D(p || q) >= 2 (p - q)^2.
BoundReport pinsker_check(double p, double q);

/// One empirical joint-survival observation entering the calibration of c.
struct CalibrationInstance {
  std::string chain_id;
  StateSet j;
  std::size_t n = 0;
  double pi_j = 0.0;
  double t_half = 0.0;
  EmpiricalTail tail;
  /// Largest c with p_hat <= exp(-c n pi(J) / T) + z99 half-width; +inf when
  /// the instance imposes no limit.
  double tight_c = std::numeric_limits<double>::infinity();
};

struct Calibration {
  /// Largest multiple of `resolution` certified on every instance.
  double c = 0.0;
  double resolution = 0.01;
  std::vector<CalibrationInstance> instances;
  /// Index of the instance with the smallest tight_c.
  std::size_t binding = 0;
};

struct CalibrationOptions {
  std::vector<std::size_t> n_grid{1, 2, 4, 8, 16, 32, 64, 128, 256};
  std::size_t trials = 100'000;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  double resolution = 0.01;
  /// Sets J: all non-empty subsets when m <= this, else singletons.
  std::size_t exhaustive_j_max_m = 10;
};

/// Tight c of one instance given its empirical tail.
double tight_c(const EmpiricalTail& tail, std::size_t n, double pi_j, double t_half);

/// Certifies c from already-simulated instances. Throws BadParams for an
/// empty list and InsufficientTrials when no instance limits c.
Calibration certify_c(std::vector<CalibrationInstance> instances, double resolution = 0.01);

/// Simulates every (chain, J, n) with n >= T(0.5) and certifies the largest c
/// for which the joint-survival bound holds with 99% CI slack. Chains need
/// m <= 20 for exact T(0.5). Deterministic given the suite and master seed.
Calibration calibrate_c(std::span<const ChainSpec> suite, const CalibrationOptions& options);

}  // namespace mml
