#pragma once

#include <cstddef>
#include <span>

namespace finprep {

/// One row of the evaluation table.
struct MetricsReport {
  double validation_mse = 0.0;  ///< mean negative CV MSE, <= 0
  double mse = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
  double r_squared = 0.0;
  double adjusted_r_squared = 0.0;
  std::size_t n_test = 0;
  std::size_t n_predictors = 0;

  bool operator==(const MetricsReport&) const = default;
};

double mse(std::span<const double> y_true, std::span<const double> y_pred);
double mae(std::span<const double> y_true, std::span<const double> y_pred);
double rmse(std::span<const double> y_true, std::span<const double> y_pred);

/// 1 - SS_res / SS_tot. Throws NumericError for constant y_true.
double r_squared(std::span<const double> y_true, std::span<const double> y_pred);

/// 1 - (1 - r2)(n - 1)/(n - p - 1). Requires p >= 1 and n > p + 1.
double adjusted_r_squared(double r2, std::size_t n, std::size_t p);

/// n_predictors counts every design column, bias included (degree + 1).
MetricsReport build_report(double validation, std::span<const double> y_true,
                           std::span<const double> y_pred, std::size_t n_predictors);

}  // namespace finprep
