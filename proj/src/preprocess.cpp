#include "finprep/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "finprep/error.hpp"
#include "finprep/linalg.hpp"

namespace finprep {

std::string_view technique_label(Technique t) {
  switch (t) {
    case Technique::Aggregation: return "Aggregation";
    case Technique::LinearInterp: return "Linear interpolation";
    case Technique::QuadraticInterp: return "Polynomial interpolation";
    case Technique::CubicSplineInterp: return "Cubic spline interpolation";
    case Technique::Lagged: return "Lagged variables";
  }
  return "?";
}

std::string_view technique_key(Technique t) {
  switch (t) {
    case Technique::Aggregation: return "aggregation";
    case Technique::LinearInterp: return "linear";
    case Technique::QuadraticInterp: return "quadratic";
    case Technique::CubicSplineInterp: return "spline";
    case Technique::Lagged: return "lagged";
  }
  return "?";
}

std::optional<Technique> parse_technique(std::string_view text) {
  static const std::map<std::string_view, Technique> names = {
      {"aggregation", Technique::Aggregation},     {"Aggregation", Technique::Aggregation},
      {"linear", Technique::LinearInterp},         {"LinearInterp", Technique::LinearInterp},
      {"quadratic", Technique::QuadraticInterp},   {"QuadraticInterp", Technique::QuadraticInterp},
      {"polynomial", Technique::QuadraticInterp},  {"spline", Technique::CubicSplineInterp},
      {"cubic", Technique::CubicSplineInterp},     {"CubicSplineInterp", Technique::CubicSplineInterp},
      {"lagged", Technique::Lagged},               {"Lagged", Technique::Lagged},
  };
  const auto it = names.find(text);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

void PreprocessSpec::validate() const {
  if (lag_steps < 1) throw std::invalid_argument("lag_steps must be >= 1");
  if (polynomial_fit_degree < 1) throw std::invalid_argument("polynomial_fit_degree must be >= 1");
  if (quadratic_window != 0 && quadratic_window < polynomial_fit_degree + 1) {
    throw std::invalid_argument("quadratic_window must be 0 (global) or >= degree + 1");
  }
}

TimeSeries aggregate_quarterly_mean(const TimeSeries& daily,
                                    const std::vector<CivilDate>& quarter_end_dates) {
  for (std::size_t i = 1; i < quarter_end_dates.size(); ++i) {
    if (!(quarter_end_dates[i - 1] < quarter_end_dates[i])) {
      throw Error("aggregate: quarter-end dates must be strictly increasing");
    }
  }
  std::vector<Observation> out;
  const auto& obs = daily.observations();
  std::size_t i = 0;
  for (const auto& end : quarter_end_dates) {
    double sum = 0.0;
    std::size_t count = 0;
    // Observations before the first quarter end fall into the first bucket.
    while (i < obs.size() && !(end < obs[i].date)) {
      sum += obs[i].value;
      ++count;
      ++i;
    }
    if (count > 0) out.push_back({end, sum / static_cast<double>(count)});
  }
  return TimeSeries(daily.name(), std::move(out), daily.unit());
}

namespace {

void check_in_range(const TimeSeries& knots, const std::vector<CivilDate>& targets,
                    std::string_view op) {
  for (const auto& t : targets) {
    if (t < knots.front_date() || knots.back_date() < t) {
      throw RangeError(std::string(op) + ": target " + t.iso() + " outside knot range [" +
                       knots.front_date().iso() + ", " + knots.back_date().iso() + "]");
    }
  }
}

}  // namespace

TimeSeries interpolate_linear(const TimeSeries& knots, const std::vector<CivilDate>& targets) {
  if (knots.size() < 2) throw NumericError("linear interpolation needs at least 2 knots");
  check_in_range(knots, targets, "linear interpolation");
  const auto t = knots.ordinals();
  const auto v = knots.values();
  std::vector<Observation> out;
  out.reserve(targets.size());
  std::size_t k = 0;
  for (const auto& date : targets) {
    const auto x = date_to_ordinal(date);
    // Targets are usually sorted; fall back to a search when they are not.
    if (k >= t.size() || t[k] > x) k = 0;
    while (k + 1 < t.size() && t[k + 1] <= x) ++k;
    if (t[k] == x) {
      out.push_back({date, v[k]});
      continue;
    }
    const double slope = (v[k + 1] - v[k]) / static_cast<double>(t[k + 1] - t[k]);
    out.push_back({date, v[k] + slope * static_cast<double>(x - t[k])});
  }
  return TimeSeries(knots.name(), std::move(out), knots.unit());
}

double QuadraticFit::evaluate(double ordinal) const {
  const double s = (ordinal - static_cast<double>(time_offset)) / time_scale;
  double acc = 0.0;
  for (double c : coefficients) acc = acc * s + c;
  return acc;
}

namespace {

QuadraticFit fit_polynomial(std::span<const std::int64_t> t, std::span<const double> v,
                            int degree) {
  const std::size_t n = t.size();
  if (degree < 1) throw NumericError("polynomial fit degree must be >= 1");
  if (n < static_cast<std::size_t>(degree) + 1) {
    throw NumericError("polynomial fit of degree " + std::to_string(degree) + " needs at least " +
                       std::to_string(degree + 1) + " knots, got " + std::to_string(n));
  }
  const auto span = t.back() - t.front();
  if (span <= 0) throw NumericError("polynomial fit: zero time span");

  QuadraticFit fit;
  fit.time_offset = t.front();
  fit.time_scale = static_cast<double>(span);
  const auto cols = static_cast<std::size_t>(degree) + 1;
  linalg::Matrix design(n, cols);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(t[i] - fit.time_offset) / fit.time_scale;
    double p = 1.0;
    for (std::size_t j = cols; j-- > 0;) {
      design(i, j) = p;
      p *= s;
    }
  }
  auto sol = linalg::solve_least_squares(design, v);
  fit.coefficients = std::move(sol.coefficients);
  return fit;
}

}  // namespace

QuadraticFit fit_quadratic(const TimeSeries& knots, int degree) {
  const auto t = knots.ordinals();
  const auto v = knots.values();
  return fit_polynomial(t, v, degree);
}

TimeSeries interpolate_quadratic(const TimeSeries& knots, const std::vector<CivilDate>& targets) {
  const auto fit = fit_quadratic(knots, 2);
  check_in_range(knots, targets, "quadratic interpolation");
  std::vector<Observation> out;
  out.reserve(targets.size());
  for (const auto& d : targets) {
    out.push_back({d, fit.evaluate(static_cast<double>(date_to_ordinal(d)))});
  }
  return TimeSeries(knots.name(), std::move(out), knots.unit());
}

TimeSeries interpolate_quadratic_local(const TimeSeries& knots,
                                       const std::vector<CivilDate>& targets, int degree,
                                       int window) {
  if (window < degree + 1) throw NumericError("local polynomial window must be >= degree + 1");
  if (knots.size() < static_cast<std::size_t>(window)) {
    throw NumericError("local polynomial interpolation needs at least " + std::to_string(window) +
                       " knots");
  }
  check_in_range(knots, targets, "quadratic interpolation");
  const auto t = knots.ordinals();
  const auto v = knots.values();
  const auto w = static_cast<std::size_t>(window);
  std::map<std::size_t, QuadraticFit> fits;

  std::vector<Observation> out;
  out.reserve(targets.size());
  for (const auto& date : targets) {
    const auto x = date_to_ordinal(date);
    // Bracketing interval [k, k+1], then grow toward whichever neighbour is closer.
    auto it = std::upper_bound(t.begin(), t.end(), x);
    std::size_t k = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    k = std::min(k, t.size() - 2);
    std::size_t lo = k, hi = k + 1;
    while (hi - lo + 1 < w) {
      const bool can_left = lo > 0;
      const bool can_right = hi + 1 < t.size();
      if (can_left && (!can_right || x - t[lo - 1] <= t[hi + 1] - x)) {
        --lo;
      } else {
        ++hi;
      }
    }
    auto found = fits.find(lo);
    if (found == fits.end()) {
      found = fits.emplace(lo, fit_polynomial(std::span(t).subspan(lo, w),
                                              std::span(v).subspan(lo, w), degree))
                  .first;
    }
    out.push_back({date, found->second.evaluate(static_cast<double>(x))});
  }
  return TimeSeries(knots.name(), std::move(out), knots.unit());
}

double SplineSegment::value(double x) const {
  const double h = x - left_knot;
  return a + h * (b + h * (c + h * d));
}

double SplineSegment::first_derivative(double x) const {
  const double h = x - left_knot;
  return b + h * (2.0 * c + h * 3.0 * d);
}

double SplineSegment::second_derivative(double x) const {
  return 2.0 * c + 6.0 * d * (x - left_knot);
}

std::vector<SplineSegment> fit_natural_cubic_spline(const TimeSeries& knots) {
  const std::size_t n = knots.size();
  if (n < 3) throw NumericError("cubic spline needs at least 3 knots");
  const auto ord = knots.ordinals();
  const auto y = knots.values();
  std::vector<double> x(n), h(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(ord[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x[i + 1] - x[i];

  // Interior second derivatives M_1..M_{n-2}; M_0 = M_{n-1} = 0.
  const std::size_t m = n - 2;
  std::vector<double> lower(m), diag(m), upper(m), rhs(m);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = r + 1;
    lower[r] = h[i - 1];
    diag[r] = 2.0 * (h[i - 1] + h[i]);
    upper[r] = h[i];
    rhs[r] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
  }
  const auto interior = linalg::solve_tridiagonal(lower, diag, upper, rhs);
  std::vector<double> M(n, 0.0);
  std::copy(interior.begin(), interior.end(), M.begin() + 1);

  std::vector<SplineSegment> segs(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto& s = segs[i];
    s.left_knot = x[i];
    s.right_knot = x[i + 1];
    s.a = y[i];
    s.b = (y[i + 1] - y[i]) / h[i] - h[i] * (2.0 * M[i] + M[i + 1]) / 6.0;
    s.c = M[i] / 2.0;
    s.d = (M[i + 1] - M[i]) / (6.0 * h[i]);
    s.right_value = y[i + 1];
  }
  return segs;
}

double evaluate_spline(const std::vector<SplineSegment>& segments, double x) {
  if (segments.empty()) throw NumericError("empty spline");
  if (x < segments.front().left_knot || x > segments.back().right_knot) {
    throw RangeError("spline evaluated outside its knot range");
  }
  if (x == segments.back().right_knot) return segments.back().right_value;
  auto it = std::upper_bound(segments.begin(), segments.end(), x,
                             [](double v, const SplineSegment& s) { return v < s.left_knot; });
  return std::prev(it)->value(x);
}

TimeSeries interpolate_cubic_spline(const TimeSeries& knots,
                                    const std::vector<CivilDate>& targets) {
  const auto segs = fit_natural_cubic_spline(knots);
  check_in_range(knots, targets, "cubic spline interpolation");
  std::vector<Observation> out;
  out.reserve(targets.size());
  for (const auto& d : targets) {
    out.push_back({d, evaluate_spline(segs, static_cast<double>(date_to_ordinal(d)))});
  }
  return TimeSeries(knots.name(), std::move(out), knots.unit());
}

TimeSeries lag_shift(const TimeSeries& ts, int steps) {
  if (steps < 0) throw RangeError("lag steps must be >= 0");
  const auto k = static_cast<std::size_t>(steps);
  if (k >= ts.size() && k > 0) {
    throw RangeError("lag of " + std::to_string(steps) + " steps needs more than " +
                     std::to_string(ts.size()) + " observations");
  }
  const auto& obs = ts.observations();
  std::vector<Observation> out;
  out.reserve(obs.size() - k);
  for (std::size_t i = k; i < obs.size(); ++i) out.push_back({obs[i].date, obs[i - k].value});
  return TimeSeries(ts.name(), std::move(out), ts.unit());
}

AlignedDataset run_preprocess(const PreprocessSpec& spec, const TimeSeries& income,
                              const TimeSeries& price) {
  spec.validate();
  if (income.empty() || price.empty()) throw Error("preprocess: empty input series");
  const auto start = std::max(income.front_date(), price.front_date());
  const auto end = std::min(income.back_date(), price.back_date());
  if (end < start) {
    throw RangeError("preprocess: no date overlap between " + income.name() + " [" +
                     income.front_date().iso() + ", " + income.back_date().iso() + "] and " +
                     price.name() + " [" + price.front_date().iso() + ", " +
                     price.back_date().iso() + "]");
  }

  switch (spec.technique) {
    case Technique::Aggregation: {
      std::vector<CivilDate> quarter_ends;
      quarter_ends.reserve(income.size());
      for (const auto& o : income.observations()) quarter_ends.push_back(o.date);
      return inner_join(income, aggregate_quarterly_mean(price, quarter_ends));
    }
    case Technique::LinearInterp: {
      const auto days = daily_calendar(start, end);
      return inner_join(interpolate_linear(income, days), interpolate_linear(price, days));
    }
    case Technique::QuadraticInterp: {
      const auto days = daily_calendar(start, end);
      if (spec.quadratic_window == 0) {
        const auto fi = fit_quadratic(income, spec.polynomial_fit_degree);
        const auto fp = fit_quadratic(price, spec.polynomial_fit_degree);
        std::vector<Observation> xi, yp;
        for (const auto& d : days) {
          const auto o = static_cast<double>(date_to_ordinal(d));
          xi.push_back({d, fi.evaluate(o)});
          yp.push_back({d, fp.evaluate(o)});
        }
        return inner_join(TimeSeries(income.name(), std::move(xi), income.unit()),
                          TimeSeries(price.name(), std::move(yp), price.unit()));
      }
      return inner_join(
          interpolate_quadratic_local(income, days, spec.polynomial_fit_degree,
                                      spec.quadratic_window),
          interpolate_quadratic_local(price, days, spec.polynomial_fit_degree,
                                      spec.quadratic_window));
    }
    case Technique::CubicSplineInterp: {
      const auto days = daily_calendar(start, end);
      return inner_join(interpolate_cubic_spline(income, days),
                        interpolate_cubic_spline(price, days));
    }
    case Technique::Lagged:
      return inner_join(lag_shift(income, spec.lag_steps), lag_shift(price, spec.lag_steps));
  }
  throw Error("unknown technique");
}

}  // namespace finprep
