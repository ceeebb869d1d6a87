#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finprep/series.hpp"

namespace finprep {

enum class Technique { Aggregation, LinearInterp, QuadraticInterp, CubicSplineInterp, Lagged };

inline constexpr Technique kAllTechniques[] = {Technique::Aggregation, Technique::LinearInterp,
                                               Technique::QuadraticInterp,
                                               Technique::CubicSplineInterp, Technique::Lagged};

/// Human-readable table label ("Linear interpolation", ...).
std::string_view technique_label(Technique t);
/// Short machine key ("linear", "lagged", ...).
std::string_view technique_key(Technique t);
/// Accepts the machine key or the enum spelling; nullopt if unknown.
std::optional<Technique> parse_technique(std::string_view text);

struct PreprocessSpec {
  Technique technique = Technique::LinearInterp;
  /// Lagged only.
  int lag_steps = 1;
  /// QuadraticInterp only.
  int polynomial_fit_degree = 2;
  /// QuadraticInterp only: number of nearest knots each target is fitted on.
  /// 0 fits one global polynomial to every knot.
  int quadratic_window = 3;

  /// Throws std::invalid_argument on out-of-range knobs.
  void validate() const;
  bool operator==(const PreprocessSpec&) const = default;
};

/// Aggregates daily observations into buckets (previous_end, end] per quarter-end date,
/// valued at the bucket mean. Empty buckets produce no row.
TimeSeries aggregate_quarterly_mean(const TimeSeries& daily,
                                    const std::vector<CivilDate>& quarter_end_dates);

/// Piecewise-linear interpolation in ordinal days. Targets must lie within the knot range.
TimeSeries interpolate_linear(const TimeSeries& knots, const std::vector<CivilDate>& targets);

/// Least-squares polynomial in scaled time s = (t - time_offset) / time_scale.
struct QuadraticFit {
  /// Highest power first: for degree 2 this is (a, b, c) of a*s^2 + b*s + c.
  std::vector<double> coefficients;
  std::int64_t time_offset = 0;
  double time_scale = 1.0;

  double evaluate(double ordinal) const;
  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

/// Global least-squares fit of a degree-`degree` polynomial through all knots.
QuadraticFit fit_quadratic(const TimeSeries& knots, int degree = 2);

/// Evaluates the global degree-2 fit at each target.
TimeSeries interpolate_quadratic(const TimeSeries& knots, const std::vector<CivilDate>& targets);

/// Fits the `window` knots nearest each target (a sliding block of consecutive knots) and
/// evaluates that local polynomial. With window = degree + 1 the result passes through
/// every knot.
TimeSeries interpolate_quadratic_local(const TimeSeries& knots,
                                       const std::vector<CivilDate>& targets, int degree = 2,
                                       int window = 3);

/// P(x) = a + b (x - left) + c (x - left)^2 + d (x - left)^3 on [left, right].
struct SplineSegment {
  double left_knot = 0.0;
  double right_knot = 0.0;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  /// Knot value at right_knot, returned verbatim when evaluating exactly there.
  double right_value = 0.0;

  double value(double x) const;
  double first_derivative(double x) const;
  double second_derivative(double x) const;
};

/// Natural cubic spline through every knot (S'' = 0 at both ends), one segment per
/// knot interval. Needs at least 3 knots.
std::vector<SplineSegment> fit_natural_cubic_spline(const TimeSeries& knots);

/// Evaluates a fitted spline at ordinal `x`; x must lie within the knot range.
double evaluate_spline(const std::vector<SplineSegment>& segments, double x);

TimeSeries interpolate_cubic_spline(const TimeSeries& knots, const std::vector<CivilDate>& targets);

/// Position i (i >= steps) takes the value from position i - steps and keeps its own date;
/// the first `steps` rows are dropped.
TimeSeries lag_shift(const TimeSeries& ts, int steps);

/// Builds the regression dataset for one technique. x is income-derived, y price-derived.
AlignedDataset run_preprocess(const PreprocessSpec& spec, const TimeSeries& income,
                              const TimeSeries& price);

}  // namespace finprep
