#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "finprep/linalg.hpp"
#include "finprep/series.hpp"

namespace finprep {

/// SplitMix64 (Steele, Lea, Flood 2014). Chosen for its tiny, fully specified state
/// update so that shuffles are identical on every platform and compiler.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return r % bound;
  }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates permutation of 0..n-1 driven by SplitMix64(seed).
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

struct SplitSpec {
  double test_fraction = 0.25;
  std::uint64_t seed = 42;

  /// ceil(test_fraction * n).
  std::size_t test_count(std::size_t n) const;
};

/// Row indices into the dataset that was split.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Shuffles row indices and takes the first ceil(fraction * n) as the test set.
Split shuffle_split(const AlignedDataset& ds, const SplitSpec& spec);

/// Gathers `values[indices[i]]`.
std::vector<double> take(std::span<const double> values, std::span<const std::size_t> indices);

/// z-score parameters; std is the population (divisor n) deviation.
struct ScalerParams {
  double mean = 0.0;
  double std = 1.0;

  double apply(double v) const noexcept { return (v - mean) / std; }
  double invert(double z) const noexcept { return z * std + mean; }
  bool operator==(const ScalerParams&) const = default;
};

ScalerParams fit_scaler(std::span<const double> values);
inline double apply_scaler(const ScalerParams& p, double v) noexcept { return p.apply(v); }
std::vector<double> apply_scaler(const ScalerParams& p, std::span<const double> v);

/// [x^0, x^1, ..., x^degree] by repeated multiplication.
std::vector<double> expand_poly(double x_scaled, int degree);
/// Stacks expand_poly rows; the first column is the bias.
linalg::Matrix design_matrix(std::span<const double> x_scaled, int degree);

struct OlsFit {
  std::vector<double> coefficients;
  std::size_t rank = 0;
  /// The design was numerically rank-deficient; coefficients are a pivoted basic solution.
  bool conditioning_warning = false;
  double rcond_estimate = 0.0;
};

/// Least squares on a design that already carries its bias column.
OlsFit fit_ols(const linalg::Matrix& design, std::span<const double> targets);

struct FittedModel {
  int degree = 1;
  /// b_0 (bias) .. b_degree, in scaled space.
  std::vector<double> coefficients;
  ScalerParams x_scaler;
  ScalerParams y_scaler;
  bool conditioning_warning = false;
  std::size_t rank = 0;

  double predict_scaled(double x_scaled) const;
  /// Scales x, evaluates, and maps the prediction back to raw y units.
  double predict(double x_raw) const;
};

/// Fits both scalers on the given rows, then OLS on the expanded scaled x.
FittedModel fit_model(std::span<const double> x_raw, std::span<const double> y_raw, int degree);

/// Mean of the k per-fold negative MSEs, each computed in the held-out fold's scaled
/// space with scalers and OLS fitted on the other folds. Folds are contiguous blocks of
/// a seeded shuffle; the first n % k folds hold one extra row.
double cross_val_neg_mse(std::span<const double> x_raw, std::span<const double> y_raw, int degree,
                         int k, std::uint64_t seed);

}  // namespace finprep
