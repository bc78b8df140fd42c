#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mml {

// Row-major dense matrix. Only what the solvers here need.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Solves a x = b by Gaussian elimination with partial pivoting.
/// Returns nullopt when a pivot falls below `pivot_tol` times the largest
/// absolute entry of `a`, i.e. the system is singular to working precision.
std::optional<std::vector<double>> solve_linear(DenseMatrix a, std::vector<double> b,
                                                double pivot_tol = 1e-13);

}  // namespace mml
