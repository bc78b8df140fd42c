#include "mml/linalg.hpp"

#include <cmath>
#include <utility>

namespace mml {

std::optional<std::vector<double>> solve_linear(DenseMatrix a, std::vector<double> b,
                                                double pivot_tol) {
  const std::size_t n = a.rows();
  if (n == 0) return std::vector<double>{};

  double scale = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (double v : a.row(r)) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return std::nullopt;
  const double threshold = pivot_tol * scale;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(a(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::abs(a(r, k)) > best) {
        best = std::abs(a(r, k));
        pivot = r;
      }
    }
    if (best <= threshold) return std::nullopt;
    if (pivot != k) {
      auto rk = a.row(k);
      auto rp = a.row(pivot);
      for (std::size_t c = k; c < n; ++c) std::swap(rk[c], rp[c]);
      std::swap(b[k], b[pivot]);
    }
    const double diag = a(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = a(r, k) / diag;
      if (f == 0.0) continue;
      auto rr = a.row(r);
      auto rk = a.row(k);
      for (std::size_t c = k + 1; c < n; ++c) rr[c] -= f * rk[c];
      rr[k] = 0.0;
      b[r] -= f * b[k];
    }
  }

  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    auto ri = a.row(i);
    for (std::size_t c = i + 1; c < n; ++c) acc -= ri[c] * x[c];
    x[i] = acc / ri[i];
  }
  return x;
}

}  // namespace mml
