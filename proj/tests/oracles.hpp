#pragma once

// Independent reference computations used only by the tests. Everything here works in
// long double and uses textbook formulations that share no code with the library.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<long double>>;

/// Gaussian elimination with partial pivoting.
inline std::vector<long double> gauss_solve(Mat a, std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::fabs(a[r][k]) > std::fabs(a[p][k])) p = r;
    }
    if (a[p][k] == 0.0L) throw std::runtime_error("oracle: singular system");
    std::swap(a[p], a[k]);
    std::swap(b[p], b[k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const long double f = a[r][k] / a[k][k];
      for (std::size_t c = k; c < n; ++c) a[r][c] -= f * a[k][c];
      b[r] -= f * b[k];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Solves (V^T V) beta = V^T y for a row-major design given as rows.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& rows,
                                            const std::vector<double>& y) {
  const std::size_t p = rows.front().size();
  Mat g(p, std::vector<long double>(p, 0.0L));
  std::vector<long double> rhs(p, 0.0L);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t a = 0; a < p; ++a) {
      rhs[a] += static_cast<long double>(rows[i][a]) * y[i];
      for (std::size_t b = 0; b < p; ++b) {
        g[a][b] += static_cast<long double>(rows[i][a]) * rows[i][b];
      }
    }
  }
  const auto sol = gauss_solve(g, rhs);
  return {sol.begin(), sol.end()};
}

/// Natural cubic spline built from the full (n x n) second-derivative system, boundary
/// rows included, evaluated with the symmetric M-form of the spline.
struct NaturalSpline {
  std::vector<long double> x, y, m;

  NaturalSpline(const std::vector<double>& xs, const std::vector<double>& ys)
      : x(xs.begin(), xs.end()), y(ys.begin(), ys.end()) {
    const std::size_t n = x.size();
    Mat a(n, std::vector<long double>(n, 0.0L));
    std::vector<long double> b(n, 0.0L);
    a[0][0] = 1.0L;
    a[n - 1][n - 1] = 1.0L;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const long double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
      a[i][i - 1] = h0 / 6.0L;
      a[i][i] = (h0 + h1) / 3.0L;
      a[i][i + 1] = h1 / 6.0L;
      b[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    m = gauss_solve(a, b);
  }

  long double operator()(long double t) const {
    std::size_t i = 0;
    while (i + 2 < x.size() && t > x[i + 1]) ++i;
    const long double h = x[i + 1] - x[i];
    const long double l = x[i + 1] - t, r = t - x[i];
    return m[i] * l * l * l / (6 * h) + m[i + 1] * r * r * r / (6 * h) +
           (y[i] / h - m[i] * h / 6) * l + (y[i + 1] / h - m[i + 1] * h / 6) * r;
  }
};

inline long double mean_sq_error(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double e = static_cast<long double>(a[i]) - b[i];
    s += e * e;
  }
  return s / a.size();
}

inline long double r_squared(const std::vector<double>& truth, const std::vector<double>& pred) {
  long double mean = 0.0L;
  for (double v : truth) mean += v;
  mean /= truth.size();
  long double tot = 0.0L, res = 0.0L;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    tot += (truth[i] - mean) * (truth[i] - mean);
    res += (static_cast<long double>(truth[i]) - pred[i]) * (static_cast<long double>(truth[i]) - pred[i]);
  }
  return 1.0L - res / tot;
}

}  // namespace oracle
