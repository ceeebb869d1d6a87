#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finprep/error.hpp"
#include "finprep/experiment.hpp"
#include "finprep/metrics.hpp"
#include "finprep/model.hpp"

namespace finprep {

enum class TableFormat { Csv, Markdown };

struct TableOptions {
  TableFormat format = TableFormat::Markdown;
  /// Shortest round-trip representation instead of 5 fixed decimals.
  bool full_precision = false;
};

/// Fixed 5 decimals; ties resolve to even (exact binary ties only).
std::string format_fixed5(double v);

/// Table-2 layout: technique, model, then the six statistics.
std::string render_table(const ComparisonGrid& grid, const TableOptions& opt);
/// Table-3 layout: model, degree, then the six statistics.
std::string render_table(const SweepResult& sweep, const TableOptions& opt);
/// A single report with the same eight columns as the grid.
std::string render_report(Technique t, std::string_view model, const MetricsReport& r,
                          const TableOptions& opt);

/// Short markdown/plain summary ordering cells by adjusted R-squared and validation MSE.
std::string render_ranking(const ComparisonGrid& grid);

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
};

struct PlotSpec {
  std::vector<PlotPoint> points;
  /// Strictly increasing x.
  std::vector<PlotPoint> curve;
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 480;
};

/// Standalone SVG 1.1: a <circle> per point, one <polyline> for the curve, axes with ticks
/// spanning the data range plus a 5% margin.
std::string emit_svg_plot(const PlotSpec& spec);

/// Test scatter in scaled space plus the model curve sampled densely over the x range.
PlotSpec plot_for_fit(const FittedModel& model, std::span<const double> x_test_raw,
                      std::span<const double> y_test_raw, std::string title,
                      std::size_t samples = 400);

/// A raw series drawn as a line (x = fractional year).
PlotSpec plot_for_series(const TimeSeries& ts, std::string title);

/// Error raised for non-2xx responses; carries the HTTP status.
class HttpError : public IoError {
 public:
  HttpError(int status, const std::string& what) : IoError(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

/// Downloads `url` verbatim into `destination` (written via a temporary file, renamed on
/// success). Returns the destination path.
std::string fetch_csv(const std::string& url, const std::string& destination);

}  // namespace finprep
