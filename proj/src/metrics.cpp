#include "finprep/metrics.hpp"

#include <cmath>
#include <string>

#include "finprep/error.hpp"

namespace finprep {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.empty()) throw NumericError("metric on empty vectors");
  if (a.size() != b.size()) {
    throw NumericError("metric length mismatch: " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
  }
}

}  // namespace

double mse(std::span<const double> y_true, std::span<const double> y_pred) {
  check_pair(y_true, y_pred);
  double s = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double e = y_pred[i] - y_true[i];
    s += e * e;
  }
  return s / static_cast<double>(y_true.size());
}

double mae(std::span<const double> y_true, std::span<const double> y_pred) {
  check_pair(y_true, y_pred);
  double s = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) s += std::abs(y_pred[i] - y_true[i]);
  return s / static_cast<double>(y_true.size());
}

double rmse(std::span<const double> y_true, std::span<const double> y_pred) {
  return std::sqrt(mse(y_true, y_pred));
}

double r_squared(std::span<const double> y_true, std::span<const double> y_pred) {
  check_pair(y_true, y_pred);
  if (y_true.size() < 2) throw NumericError("R-squared needs at least 2 points");
  double mean = 0.0;
  for (double v : y_true) mean += v;
  mean /= static_cast<double>(y_true.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ss_tot += (y_true[i] - mean) * (y_true[i] - mean);
    ss_res += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
  }
  if (!(ss_tot > 0.0)) throw NumericError("R-squared undefined: y_true is constant");
  return 1.0 - ss_res / ss_tot;
}

double adjusted_r_squared(double r2, std::size_t n, std::size_t p) {
  if (p < 1) throw NumericError("adjusted R-squared needs p >= 1");
  if (n <= p + 1) {
    throw NumericError("adjusted R-squared needs n > p + 1 (n = " + std::to_string(n) +
                       ", p = " + std::to_string(p) + ")");
  }
  const double nn = static_cast<double>(n), pp = static_cast<double>(p);
  return 1.0 - (1.0 - r2) * (nn - 1.0) / (nn - pp - 1.0);
}

MetricsReport build_report(double validation, std::span<const double> y_true,
                           std::span<const double> y_pred, std::size_t n_predictors) {
  MetricsReport r;
  r.validation_mse = validation;
  r.mse = mse(y_true, y_pred);
  r.mae = mae(y_true, y_pred);
  r.rmse = std::sqrt(r.mse);
  r.r_squared = r_squared(y_true, y_pred);
  r.n_test = y_true.size();
  r.n_predictors = n_predictors;
  r.adjusted_r_squared = adjusted_r_squared(r.r_squared, r.n_test, n_predictors);
  return r;
}

}  // namespace finprep
