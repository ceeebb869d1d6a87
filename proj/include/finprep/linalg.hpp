#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace finprep::linalg {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  /// Max absolute row sum.
  double norm_inf() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct LeastSquaresSolution {
  std::vector<double> coefficients;
  /// Numerical rank found by the pivoted factorization.
  std::size_t rank = 0;
  /// Set when rank < number of columns: the trailing pivoted columns were dropped
  /// (their coefficients are zero) and the answer should be treated as untrusted.
  bool rank_deficient = false;
  /// |R_rr| / |R_11| of the last retained pivot; a cheap reciprocal condition estimate.
  double rcond_estimate = 0.0;
};

/// Minimizes ||A b - y||_2 with Householder QR and column pivoting.
///
/// A pivot whose remaining column norm falls to `tolerance * |R_11|` or below ends the
/// factorization; the columns not yet chosen are treated as dependent and receive zero
/// coefficients (the basic solution). With `tolerance <= 0` the default
/// eps * max(rows, cols) is used. Requires rows >= cols.
LeastSquaresSolution solve_least_squares(const Matrix& a, std::span<const double> y,
                                         double tolerance = 0.0);

/// A^T v.
std::vector<double> transpose_times(const Matrix& a, std::span<const double> v);
/// A v.
std::vector<double> times(const Matrix& a, std::span<const double> v);

/// Solves a tridiagonal system with the Thomas algorithm. `lower[i]` multiplies x[i-1]
/// in row i (lower[0] ignored), `upper[i]` multiplies x[i+1] (last entry ignored).
/// Assumes diagonal dominance; no pivoting.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

}  // namespace finprep::linalg
