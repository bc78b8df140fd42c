#include "mml/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "mml/error.hpp"

namespace mml {

namespace {

constexpr double kClampSlack = 1e-15;

std::vector<std::vector<std::size_t>> support_graph(const TransitionMatrix& p, bool reversed) {
  const std::size_t m = p.size();
  std::vector<std::vector<std::size_t>> adj(m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      if (p(x, y) > 0.0) adj[reversed ? y : x].push_back(reversed ? x : y);
  return adj;
}

std::size_t reachable_count(const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    for (auto y : adj[x]) {
      if (!seen[y]) {
        seen[y] = 1;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count;
}

std::vector<double> power_iteration(const TransitionMatrix& p) {
  // Iterates the lazy chain (I + P) / 2, which shares pi and is aperiodic.
  const std::size_t m = p.size();
  std::vector<double> pi(m, 1.0 / static_cast<double>(m)), next(m);
  for (int step = 0; step < 1'000'000; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t x = 0; x < m; ++x) {
      const double w = pi[x];
      if (w == 0.0) continue;
      auto r = p.row(x);
      for (std::size_t y = 0; y < m; ++y) next[y] += w * r[y];
    }
    double delta = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
      next[y] = 0.5 * (next[y] + pi[y]);
      delta = std::max(delta, std::abs(next[y] - pi[y]));
    }
    pi.swap(next);
    if (delta < 1e-12) break;
  }
  return pi;
}

void normalize(std::vector<double>& v) {
  for (auto& x : v)
    if (x < 0.0) x = 0.0;
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= total;
}

std::vector<double> dirichlet_row(std::mt19937_64& rng, std::size_t m, double alpha) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> row(m);
  double total = 0.0;
  do {
    total = 0.0;
    for (auto& v : row) {
      v = gamma(rng);
      total += v;
    }
  } while (!(total > 0.0));
  for (auto& v : row) v /= total;
  return row;
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

TransitionMatrix TransitionMatrix::validate(const std::vector<std::vector<double>>& raw,
                                            std::vector<std::string> labels) {
  const std::size_t m = raw.size();
  if (m == 0) throw Error(ErrorKind::NonSquare, "transition matrix has no rows");
  for (std::size_t x = 0; x < m; ++x) {
    if (raw[x].size() != m)
      throw Error(ErrorKind::NonSquare, "row " + std::to_string(x) + " has " +
                                            std::to_string(raw[x].size()) +
                                            " entries, expected " + std::to_string(m));
  }
  if (!labels.empty() && labels.size() != m)
    throw Error(ErrorKind::NonSquare, "labels has " + std::to_string(labels.size()) +
                                          " entries, expected " + std::to_string(m));

  TransitionMatrix out;
  out.p_ = DenseMatrix(m, m);
  out.labels_ = std::move(labels);
  for (std::size_t x = 0; x < m; ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
      double v = raw[x][y];
      if (!std::isfinite(v))
        throw Error(ErrorKind::NegativeEntry, "entry (" + std::to_string(x) + "," +
                                                  std::to_string(y) + ") is not finite");
      if (v < -kClampSlack || v > 1.0 + kClampSlack)
        throw Error(ErrorKind::NegativeEntry, "entry (" + std::to_string(x) + "," +
                                                  std::to_string(y) + ") = " + fmt_num(v) +
                                                  " outside [0, 1]");
      v = std::clamp(v, 0.0, 1.0);
      out.p_(x, y) = v;
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      throw Error(ErrorKind::NonStochasticRow,
                  "row " + std::to_string(x) + " sums to " + fmt_num(sum));
  }
  return out;
}

TransitionMatrix TransitionMatrix::permuted(std::span<const std::size_t> perm) const {
  const std::size_t m = size();
  TransitionMatrix out;
  out.p_ = DenseMatrix(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out.p_(i, j) = p_(perm[i], perm[j]);
  if (!labels_.empty()) {
    out.labels_.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.labels_[i] = labels_[perm[i]];
  }
  return out;
}

bool is_irreducible(const TransitionMatrix& p) {
  const std::size_t m = p.size();
  if (m == 1) return true;
  return reachable_count(support_graph(p, false)) == m &&
         reachable_count(support_graph(p, true)) == m;
}

double stationary_residual(const TransitionMatrix& p, std::span<const double> pi) {
  const std::size_t m = p.size();
  double worst = 0.0;
  for (std::size_t y = 0; y < m; ++y) {
    double acc = 0.0;
    for (std::size_t x = 0; x < m; ++x) acc += pi[x] * p(x, y);
    worst = std::max(worst, std::abs(acc - pi[y]));
  }
  return worst;
}

StationaryDistribution stationary(const TransitionMatrix& p) {
  if (!is_irreducible(p))
    throw Error(ErrorKind::NotIrreducible, "chain is not irreducible");
  const std::size_t m = p.size();

  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  DenseMatrix a(m, m);
  for (std::size_t r = 0; r + 1 < m; ++r)
    for (std::size_t c = 0; c < m; ++c) a(r, c) = p(c, r) - (r == c ? 1.0 : 0.0);
  for (std::size_t c = 0; c < m; ++c) a(m - 1, c) = 1.0;
  std::vector<double> b(m, 0.0);
  b[m - 1] = 1.0;

  StationaryDistribution out;
  if (auto solved = solve_linear(std::move(a), std::move(b))) {
    out.pi = std::move(*solved);
    normalize(out.pi);
    out.residual = stationary_residual(p, out.pi);
  }
  if (out.pi.empty() || out.residual > kStationaryResidualTolerance) {
    out.pi = power_iteration(p);
    normalize(out.pi);
    out.residual = stationary_residual(p, out.pi);
    out.used_power_iteration = true;
  }
  return out;
}

void validate_start(std::span<const double> start, std::size_t m) {
  if (start.size() != m)
    throw Error(ErrorKind::BadParams, "start has " + std::to_string(start.size()) +
                                          " entries, expected " + std::to_string(m));
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(start[i] >= 0.0))
      throw Error(ErrorKind::BadParams, "start[" + std::to_string(i) + "] is negative");
    sum += start[i];
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance)
    throw Error(ErrorKind::BadParams, "start sums to " + fmt_num(sum));
}

std::vector<double> initial_law(const ChainSpec& chain) {
  if (chain.start) return *chain.start;
  return stationary(chain.matrix).pi;
}

std::vector<double> point_mass(std::size_t x, std::size_t m) {
  std::vector<double> out(m, 0.0);
  out.at(x) = 1.0;
  return out;
}

Family parse_family(const std::string& name) {
  if (name == "iid") return Family::Iid;
  if (name == "lazy-cycle") return Family::LazyCycle;
  if (name == "birth-death") return Family::BirthDeath;
  if (name == "random-dense") return Family::RandomDense;
  if (name == "two-state") return Family::TwoState;
  throw Error(ErrorKind::BadParams, "unknown chain family '" + name + "'");
}

std::string family_name(Family family) {
  switch (family) {
    case Family::Iid: return "iid";
    case Family::LazyCycle: return "lazy-cycle";
    case Family::BirthDeath: return "birth-death";
    case Family::RandomDense: return "random-dense";
    case Family::TwoState: return "two-state";
  }
  return "unknown";
}

std::string describe(const FamilyParams& params) {
  std::string out = family_name(params.family) + "(";
  switch (params.family) {
    case Family::Iid: {
      out += "mu=";
      for (std::size_t i = 0; i < params.mu.size(); ++i) {
        if (i) out += ":";
        out += fmt_num(params.mu[i]);
      }
      break;
    }
    case Family::LazyCycle:
      out += "m=" + std::to_string(params.m) + ",hold=" + fmt_num(params.hold);
      break;
    case Family::BirthDeath:
      out += "m=" + std::to_string(params.m) + ",p=" + fmt_num(params.p) +
             ",q=" + fmt_num(params.q);
      break;
    case Family::RandomDense:
      out += "m=" + std::to_string(params.m) + ",alpha=" + fmt_num(params.alpha) +
             ",seed=" + std::to_string(params.seed);
      break;
    case Family::TwoState:
      out += "p=" + fmt_num(params.p) + ",q=" + fmt_num(params.q);
      break;
  }
  return out + ")";
}

ChainSpec generate(const FamilyParams& params) {
  std::vector<std::vector<double>> rows;
  switch (params.family) {
    case Family::Iid: {
      const auto& mu = params.mu;
      if (mu.empty()) throw Error(ErrorKind::BadParams, "iid: mu is empty");
      if (params.m != 0 && params.m != mu.size())
        throw Error(ErrorKind::BadParams, "iid: m does not match length of mu");
      double sum = 0.0;
      for (double v : mu) {
        if (!(v > 0.0))
          throw Error(ErrorKind::BadParams, "iid: mu entries must be positive");
        sum += v;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance)
        throw Error(ErrorKind::BadParams, "iid: mu sums to " + fmt_num(sum));
      rows.assign(mu.size(), mu);
      break;
    }
    case Family::LazyCycle: {
      const std::size_t m = params.m;
      if (m == 0) throw Error(ErrorKind::BadParams, "lazy-cycle: m must be >= 1");
      if (!(params.hold >= 0.0 && params.hold < 1.0))
        throw Error(ErrorKind::BadParams, "lazy-cycle: hold must lie in [0, 1)");
      rows.assign(m, std::vector<double>(m, 0.0));
      for (std::size_t i = 0; i < m; ++i) {
        if (m == 1) {
          rows[i][i] = 1.0;
          continue;
        }
        const double move = 0.5 * (1.0 - params.hold);
        rows[i][i] += params.hold;
        rows[i][(i + 1) % m] += move;
        rows[i][(i + m - 1) % m] += move;
      }
      break;
    }
    case Family::BirthDeath: {
      const std::size_t m = params.m;
      if (m == 0) throw Error(ErrorKind::BadParams, "birth-death: m must be >= 1");
      if (!(params.p > 0.0 && params.q > 0.0 && params.p + params.q <= 1.0))
        throw Error(ErrorKind::BadParams, "birth-death: need p, q > 0 and p + q <= 1");
      rows.assign(m, std::vector<double>(m, 0.0));
      for (std::size_t i = 0; i < m; ++i) {
        double stay = 1.0;
        if (i + 1 < m) {
          rows[i][i + 1] = params.p;
          stay -= params.p;
        }
        if (i > 0) {
          rows[i][i - 1] = params.q;
          stay -= params.q;
        }
        rows[i][i] = stay;
      }
      break;
    }
    case Family::RandomDense: {
      const std::size_t m = params.m;
      if (m == 0) throw Error(ErrorKind::BadParams, "random-dense: m must be >= 1");
      if (!(params.alpha > 0.0))
        throw Error(ErrorKind::BadParams, "random-dense: alpha must be positive");
      std::mt19937_64 rng(params.seed);
      for (int attempt = 0;; ++attempt) {
        if (attempt == 1000)
          throw Error(ErrorKind::BadParams, "random-dense: no irreducible draw in 1000 tries");
        rows.clear();
        for (std::size_t i = 0; i < m; ++i) rows.push_back(dirichlet_row(rng, m, params.alpha));
        if (is_irreducible(TransitionMatrix::validate(rows))) break;
      }
      break;
    }
    case Family::TwoState: {
      if (params.m != 0 && params.m != 2)
        throw Error(ErrorKind::BadParams, "two-state: m must be 2");
      if (!(params.p > 0.0 && params.p <= 1.0 && params.q > 0.0 && params.q <= 1.0))
        throw Error(ErrorKind::BadParams, "two-state: need p, q in (0, 1]");
      rows = {{1.0 - params.p, params.p}, {params.q, 1.0 - params.q}};
      break;
    }
  }
  return ChainSpec{TransitionMatrix::validate(rows), std::nullopt, describe(params)};
}

}  // namespace mml
