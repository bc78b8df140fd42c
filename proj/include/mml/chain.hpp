#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mml/linalg.hpp"

namespace mml {

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr double kStationaryResidualTolerance = 1e-10;

/// Validated row-stochastic matrix P over m states.
class TransitionMatrix {
 public:
  /// Validates a raw square matrix. Entries within 1e-15 of [0, 1] are clamped.
  /// Throws NonSquare, NegativeEntry or NonStochasticRow.
  static TransitionMatrix validate(const std::vector<std::vector<double>>& raw,
                                   std::vector<std::string> labels = {});

  std::size_t size() const { return p_.rows(); }
  double operator()(std::size_t x, std::size_t y) const { return p_(x, y); }
  std::span<const double> row(std::size_t x) const { return p_.row(x); }
  const DenseMatrix& dense() const { return p_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Same chain with states renamed: new state i is old state perm[i].
  TransitionMatrix permuted(std::span<const std::size_t> perm) const;

 private:
  TransitionMatrix() = default;
  DenseMatrix p_;
  std::vector<std::string> labels_;
};

struct StationaryDistribution {
  std::vector<double> pi;
  /// max_y |(pi P)(y) - pi(y)|, recomputed after solving.
  double residual = 0.0;
  /// True when the direct solve was singular and power iteration was used.
  bool used_power_iteration = false;
};

/// Chain plus its start law X_1 ~ start. An absent start means "stationary".
struct ChainSpec {
  TransitionMatrix matrix;
  std::optional<std::vector<double>> start;
  std::string id;
};

/// True iff the support graph {(x, y) : P(x, y) > 0} is strongly connected.
bool is_irreducible(const TransitionMatrix& p);

/// Throws NotIrreducible for reducible chains.
StationaryDistribution stationary(const TransitionMatrix& p);

/// max_y |(pi P)(y) - pi(y)|.
double stationary_residual(const TransitionMatrix& p, std::span<const double> pi);

/// Validates a start law of length m (nonnegative, sums to 1 within 1e-12).
void validate_start(std::span<const double> start, std::size_t m);

/// The start law of `chain`, computing the stationary law when absent.
std::vector<double> initial_law(const ChainSpec& chain);

/// Point mass on state x.
std::vector<double> point_mass(std::size_t x, std::size_t m);

enum class Family { Iid, LazyCycle, BirthDeath, RandomDense, TwoState };

struct FamilyParams {
  Family family = Family::Iid;
  std::size_t m = 0;
  std::vector<double> mu;  // iid
  double hold = 0.5;       // lazy-cycle
  double p = 0.0;          // birth-death (up), two-state (0 -> 1)
  double q = 0.0;          // birth-death (down), two-state (1 -> 0)
  double alpha = 1.0;      // random-dense Dirichlet concentration
  std::uint64_t seed = 0;  // random-dense
};

Family parse_family(const std::string& name);
std::string family_name(Family family);
/// Short stable identifier, e.g. "lazy-cycle(m=5,hold=0.5)".
std::string describe(const FamilyParams& params);

/// Deterministic irreducible chain for the given family; start left stationary.
/// Throws BadParams on inconsistent parameters.
ChainSpec generate(const FamilyParams& params);

}  // namespace mml
