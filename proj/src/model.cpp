#include "finprep/model.hpp"

#include <cmath>
#include <numeric>

#include "finprep/error.hpp"

namespace finprep {

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

std::size_t SplitSpec::test_count(std::size_t n) const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw NumericError("test_fraction must lie in (0, 1)");
  }
  // Guard against 0.25 * n landing a hair above an integer.
  const double raw = test_fraction * static_cast<double>(n);
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) < 1e-9) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(raw));
}

Split shuffle_split(const AlignedDataset& ds, const SplitSpec& spec) {
  const std::size_t n = ds.size();
  if (n < 4) throw NumericError("split needs at least 4 rows, got " + std::to_string(n));
  const std::size_t n_test = spec.test_count(n);
  if (n_test < 1 || n_test >= n) throw NumericError("split leaves an empty partition");
  const auto perm = seeded_permutation(n, spec.seed);
  Split s;
  s.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  s.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
  return s;
}

std::vector<double> take(std::span<const double> values, std::span<const std::size_t> indices) {
  std::vector<double> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(values[i]);
  return out;
}

ScalerParams fit_scaler(std::span<const double> values) {
  if (values.size() < 2) throw NumericError("scaler needs at least 2 values");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd > 0.0)) throw NumericError("constant column: zero variance");
  return {mean, sd};
}

std::vector<double> apply_scaler(const ScalerParams& p, std::span<const double> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(p.apply(x));
  return out;
}

std::vector<double> expand_poly(double x_scaled, int degree) {
  if (degree < 0) throw NumericError("expansion degree must be >= 0");
  std::vector<double> row(static_cast<std::size_t>(degree) + 1);
  double p = 1.0;
  for (auto& v : row) {
    v = p;
    p *= x_scaled;
  }
  return row;
}

linalg::Matrix design_matrix(std::span<const double> x_scaled, int degree) {
  if (degree < 0) throw NumericError("expansion degree must be >= 0");
  linalg::Matrix m(x_scaled.size(), static_cast<std::size_t>(degree) + 1);
  for (std::size_t r = 0; r < x_scaled.size(); ++r) {
    double p = 1.0;
    for (auto& v : m.row(r)) {
      v = p;
      p *= x_scaled[r];
    }
  }
  return m;
}

OlsFit fit_ols(const linalg::Matrix& design, std::span<const double> targets) {
  if (design.rows() < design.cols()) {
    throw NumericError("OLS needs rows >= columns (" + std::to_string(design.rows()) + " < " +
                       std::to_string(design.cols()) + ")");
  }
  auto sol = linalg::solve_least_squares(design, targets);
  return {std::move(sol.coefficients), sol.rank, sol.rank_deficient, sol.rcond_estimate};
}

double FittedModel::predict_scaled(double x_scaled) const {
  double acc = 0.0;
  for (std::size_t j = coefficients.size(); j-- > 0;) acc = acc * x_scaled + coefficients[j];
  return acc;
}

double FittedModel::predict(double x_raw) const {
  return y_scaler.invert(predict_scaled(x_scaler.apply(x_raw)));
}

FittedModel fit_model(std::span<const double> x_raw, std::span<const double> y_raw, int degree) {
  if (x_raw.size() != y_raw.size()) throw NumericError("x and y lengths differ");
  if (degree < 1) throw NumericError("model degree must be >= 1");
  FittedModel m;
  m.degree = degree;
  m.x_scaler = fit_scaler(x_raw);
  m.y_scaler = fit_scaler(y_raw);
  const auto xs = apply_scaler(m.x_scaler, x_raw);
  const auto ys = apply_scaler(m.y_scaler, y_raw);
  auto fit = fit_ols(design_matrix(xs, degree), ys);
  m.coefficients = std::move(fit.coefficients);
  m.conditioning_warning = fit.conditioning_warning;
  m.rank = fit.rank;
  return m;
}

double cross_val_neg_mse(std::span<const double> x_raw, std::span<const double> y_raw, int degree,
                         int k, std::uint64_t seed) {
  const std::size_t n = x_raw.size();
  if (y_raw.size() != n) throw NumericError("x and y lengths differ");
  if (k < 2) throw NumericError("cross-validation needs k >= 2");
  if (static_cast<std::size_t>(k) > n) {
    throw NumericError("cross-validation: k = " + std::to_string(k) + " exceeds " +
                       std::to_string(n) + " rows");
  }
  const auto perm = seeded_permutation(n, seed);
  const auto folds = static_cast<std::size_t>(k);
  const std::size_t base = n / folds, extra = n % folds;

  double total = 0.0;
  std::size_t begin = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    const std::size_t end = begin + len;
    std::vector<double> xt, yt, xh, yh;
    xt.reserve(n - len);
    yt.reserve(n - len);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = perm[i];
      if (i >= begin && i < end) {
        xh.push_back(x_raw[row]);
        yh.push_back(y_raw[row]);
      } else {
        xt.push_back(x_raw[row]);
        yt.push_back(y_raw[row]);
      }
    }
    const auto model = fit_model(xt, yt, degree);
    double sse = 0.0;
    for (std::size_t i = 0; i < xh.size(); ++i) {
      const double e = model.predict_scaled(model.x_scaler.apply(xh[i])) - model.y_scaler.apply(yh[i]);
      sse += e * e;
    }
    total += -sse / static_cast<double>(xh.size());
    begin = end;
  }
  return total / static_cast<double>(folds);
}

}  // namespace finprep
