#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finprep/metrics.hpp"
#include "finprep/model.hpp"
#include "finprep/preprocess.hpp"
#include "finprep/series.hpp"

namespace finprep {

enum class ModelKind { Linear, Polynomial };

std::string_view model_label(ModelKind k);

struct ExperimentConfig {
  std::uint64_t seed = 42;
  double test_fraction = 0.25;
  int cv_folds = 5;
  std::vector<PreprocessSpec> techniques = default_techniques();
  int linear_degree = 1;
  int polynomial_degree = 2;
  std::vector<int> sweep_degrees = default_sweep_degrees();
  double collapse_threshold = 0.10;
  /// Score in raw price units instead of standardized units.
  bool raw_space_metrics = false;
  /// Worker threads for independent cells/degrees; output never depends on it.
  int jobs = 1;

  static std::vector<PreprocessSpec> default_techniques();
  /// 2..10, 15, 32, 33, 34.
  static std::vector<int> default_sweep_degrees();

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  int degree_for(ModelKind k) const { return k == ModelKind::Linear ? linear_degree : polynomial_degree; }
};

/// Everything computed for one (dataset, degree) evaluation.
struct CellOutcome {
  MetricsReport report;
  bool conditioning_warning = false;
  std::size_t rank = 0;
  /// Training-set MSE in the scaled space of the fitted model.
  double train_mse = 0.0;
};

/// Split, scale, fit and score one degree on an already preprocessed dataset.
CellOutcome evaluate_dataset(const AlignedDataset& ds, int degree, const ExperimentConfig& cfg);

/// Preprocess, then evaluate_dataset. Throws on any failure.
MetricsReport run_cell(const TimeSeries& income, const TimeSeries& price,
                       const PreprocessSpec& technique, int degree, const ExperimentConfig& cfg);

struct GridCell {
  Technique technique = Technique::LinearInterp;
  ModelKind model = ModelKind::Linear;
  std::optional<CellOutcome> outcome;
  /// Short error class ("numeric", "range", ...) when outcome is empty.
  std::string error_code;
  std::string error_message;

  bool ok() const { return outcome.has_value(); }
};

struct ComparisonGrid {
  /// Technique-major, linear before polynomial, in config order.
  std::vector<GridCell> cells;
  std::map<Technique, std::size_t> row_counts;
  std::uint64_t seed = 0;

  /// Indices of successful cells, best first (highest adjusted R-squared).
  std::vector<std::size_t> rank_by_adjusted_r2() const;
  /// Indices of successful cells, best first (validation MSE closest to zero).
  std::vector<std::size_t> rank_by_validation_mse() const;
  const GridCell* find(Technique t, ModelKind k) const;
};

ComparisonGrid run_comparison(const TimeSeries& income, const TimeSeries& price,
                              const ExperimentConfig& cfg);

struct SweepRow {
  int degree = 0;
  CellOutcome outcome;
};

struct SweepResult {
  Technique technique = Technique::LinearInterp;
  std::vector<SweepRow> rows;
  int peak_degree = 0;
  std::optional<int> collapse_degree;
  std::uint64_t seed = 0;
};

/// Recomputes peak and collapse degrees from the rows alone.
void locate_peak_and_collapse(SweepResult& sweep, double collapse_threshold);

SweepResult run_sweep(const TimeSeries& income, const TimeSeries& price,
                      const PreprocessSpec& technique, const ExperimentConfig& cfg);

/// Maps an exception to the short code shown in tables.
std::string error_code_for(const std::exception& e);

}  // namespace finprep
