#include "finprep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "finprep/error.hpp"

namespace finprep::linalg {

double Matrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (double v : row(r)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

std::vector<double> transpose_times(const Matrix& a, std::span<const double> v) {
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) out[c] += row[c] * v[r];
  }
  return out;
}

std::vector<double> times(const Matrix& a, std::span<const double> v) {
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) s += row[c] * v[c];
    out[r] = s;
  }
  return out;
}

LeastSquaresSolution solve_least_squares(const Matrix& a, std::span<const double> y,
                                         double tolerance) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (y.size() != m) throw NumericError("least squares: target length does not match rows");
  if (m < n) {
    throw NumericError("least squares: " + std::to_string(m) + " rows < " + std::to_string(n) +
                       " columns");
  }
  if (tolerance <= 0.0) {
    tolerance = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(m, n));
  }

  // Column-major working copy; each column is contiguous for the reflector updates.
  std::vector<std::vector<double>> col(n, std::vector<double>(m));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) col[c][r] = a(r, c);
  }
  std::vector<double> qty(y.begin(), y.end());
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<double> diag(n, 0.0);

  auto tail_norm = [&](std::size_t c, std::size_t from) {
    // Scaled accumulation; the raw expansion spans many orders of magnitude.
    double scale = 0.0, ssq = 1.0;
    for (std::size_t r = from; r < m; ++r) {
      const double v = std::abs(col[c][r]);
      if (v == 0.0) continue;
      if (scale < v) {
        ssq = 1.0 + ssq * (scale / v) * (scale / v);
        scale = v;
      } else {
        ssq += (v / scale) * (v / scale);
      }
    }
    return scale * std::sqrt(ssq);
  };

  std::size_t rank = 0;
  double r11 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t c = k; c < n; ++c) {
      const double nc = tail_norm(c, k);
      if (nc > best_norm) {
        best_norm = nc;
        best = c;
      }
    }
    if (k == 0) r11 = best_norm;
    if (best_norm == 0.0 || best_norm <= tolerance * r11) break;
    if (best != k) {
      std::swap(col[k], col[best]);
      std::swap(perm[k], perm[best]);
    }

    auto& v = col[k];
    const double alpha = v[k] >= 0.0 ? -best_norm : best_norm;
    v[k] -= alpha;
    // v now holds the Householder vector on rows k..m-1; ||v||^2 = 2 * norm * (norm + |x_k|).
    const double vnorm2 = 2.0 * best_norm * (best_norm + std::abs(v[k] + alpha));
    if (vnorm2 > 0.0) {
      for (std::size_t c = k + 1; c < n; ++c) {
        auto& w = col[c];
        double dot = 0.0;
        for (std::size_t r = k; r < m; ++r) dot += v[r] * w[r];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t r = k; r < m; ++r) w[r] -= f * v[r];
      }
      double dot = 0.0;
      for (std::size_t r = k; r < m; ++r) dot += v[r] * qty[r];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t r = k; r < m; ++r) qty[r] -= f * v[r];
    }
    diag[k] = alpha;
    rank = k + 1;
  }

  // Back substitution on the leading rank x rank block. Above-diagonal entries of R
  // live in col[c][r] for r < c; the diagonal is kept separately.
  std::vector<double> z(rank, 0.0);
  for (std::size_t i = rank; i-- > 0;) {
    double s = qty[i];
    for (std::size_t c = i + 1; c < rank; ++c) s -= col[c][i] * z[c];
    z[i] = s / diag[i];
  }

  LeastSquaresSolution out;
  out.coefficients.assign(n, 0.0);
  for (std::size_t i = 0; i < rank; ++i) out.coefficients[perm[i]] = z[i];
  out.rank = rank;
  out.rank_deficient = rank < n;
  out.rcond_estimate = rank > 0 && r11 > 0.0 ? std::abs(diag[rank - 1]) / r11 : 0.0;
  return out;
}

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw NumericError("tridiagonal: band lengths differ");
  }
  if (n == 0) return {};
  std::vector<double> c(n, 0.0), d(n, 0.0);
  c[0] = upper[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double denom = diag[i] - lower[i] * c[i - 1];
    if (denom == 0.0) throw NumericError("tridiagonal: zero pivot");
    c[i] = i + 1 < n ? upper[i] / denom : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
  }
  std::vector<double> x(n);
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

}  // namespace finprep::linalg
