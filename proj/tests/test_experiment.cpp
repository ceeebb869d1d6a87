#include <cmath>

#include "doctest.h"
#include "finprep/error.hpp"
#include "finprep/experiment.hpp"
#include "test_util.hpp"

using namespace finprep;

namespace {

const TimeSeries& income() {
  static const auto ts = testutil::income();
  return ts;
}
const TimeSeries& price() {
  static const auto ts = testutil::price();
  return ts;
}

PreprocessSpec spec_for(Technique t) {
  PreprocessSpec s;
  s.technique = t;
  return s;
}

void check_same(const ComparisonGrid& a, const ComparisonGrid& b) {
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    REQUIRE(a.cells[i].ok() == b.cells[i].ok());
    if (a.cells[i].ok()) CHECK(a.cells[i].outcome->report == b.cells[i].outcome->report);
  }
  CHECK(a.row_counts == b.row_counts);
}

}  // namespace

TEST_CASE("run_cell on the fixtures") {
  const ExperimentConfig cfg;
  const auto lin = run_cell(income(), price(), spec_for(Technique::LinearInterp), 2, cfg);
  CHECK(std::abs(lin.adjusted_r_squared - 0.76603) <= 0.05);
  CHECK(lin.n_test == 1347);
  CHECK(lin.n_predictors == 3);
  const auto agg = run_cell(income(), price(), spec_for(Technique::Aggregation), 1, cfg);
  CHECK(agg.n_test == 15);
  CHECK(run_cell(income(), price(), spec_for(Technique::LinearInterp), 2, cfg) == lin);
  CHECK_THROWS_AS(run_cell(income(), price(), spec_for(Technique::LinearInterp), 0, cfg), NumericError);
}

TEST_CASE("run_comparison shape, row counts and n_test") {
  const ExperimentConfig cfg;
  const auto grid = run_comparison(income(), price(), cfg);
  CHECK(grid.cells.size() == 10);
  CHECK(grid.row_counts.at(Technique::Aggregation) == 60);
  CHECK(grid.row_counts.at(Technique::LinearInterp) == 5387);
  CHECK(grid.row_counts.at(Technique::QuadraticInterp) == 5387);
  CHECK(grid.row_counts.at(Technique::CubicSplineInterp) == 5387);
  CHECK(grid.row_counts.at(Technique::Lagged) == 42);
  for (const auto& c : grid.cells) {
    REQUIRE(c.ok());
    const auto rows = grid.row_counts.at(c.technique);
    CHECK(c.outcome->report.n_test == static_cast<std::size_t>(std::ceil(0.25 * double(rows))));
  }
  const auto best = grid.rank_by_adjusted_r2().front();
  CHECK(grid.cells[best].technique == Technique::LinearInterp);
  CHECK(grid.cells[best].model == ModelKind::Polynomial);
  CHECK(grid.cells[grid.rank_by_validation_mse().front()].technique == Technique::LinearInterp);
}

TEST_CASE("comparison cells equal standalone run_cell results") {
  const ExperimentConfig cfg;
  const auto grid = run_comparison(income(), price(), cfg);
  for (const auto& c : grid.cells) {
    const auto r = run_cell(income(), price(), spec_for(c.technique), cfg.degree_for(c.model), cfg);
    CHECK(r == c.outcome->report);
  }
}

TEST_CASE("grid is identical under serial and parallel schedules") {
  ExperimentConfig serial;
  ExperimentConfig parallel;
  parallel.jobs = 4;
  const auto a = run_comparison(income(), price(), serial);
  check_same(a, run_comparison(income(), price(), serial));
  check_same(a, run_comparison(income(), price(), parallel));
}

TEST_CASE("failing techniques become error cells") {
  ExperimentConfig cfg;
  PreprocessSpec lag = spec_for(Technique::Lagged);
  lag.lag_steps = 59;  // leaves a single income row
  cfg.techniques = {spec_for(Technique::Aggregation), lag};
  const auto grid = run_comparison(income(), price(), cfg);
  REQUIRE(grid.cells.size() == 4);
  CHECK(grid.cells[0].ok());
  CHECK_FALSE(grid.cells[2].ok());
  CHECK(grid.cells[2].error_code == "numeric");
  CHECK(grid.rank_by_adjusted_r2().size() == 2);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  cfg.sweep_degrees = {3, 2};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.sweep_degrees = {0, 2};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.test_fraction = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.techniques.clear();
  CHECK_THROWS_AS(run_comparison(income(), price(), cfg), std::invalid_argument);
}

TEST_CASE("single-degree sweep equals run_cell") {
  ExperimentConfig cfg;
  cfg.sweep_degrees = {2};
  const auto spec = spec_for(Technique::LinearInterp);
  const auto sweep = run_sweep(income(), price(), spec, cfg);
  REQUIRE(sweep.rows.size() == 1);
  CHECK(sweep.rows[0].outcome.report == run_cell(income(), price(), spec, 2, cfg));
}

TEST_CASE("default sweep on linear interpolation") {
  ExperimentConfig cfg;
  cfg.jobs = 4;
  const auto sweep = run_sweep(income(), price(), spec_for(Technique::LinearInterp), cfg);
  REQUIRE(sweep.rows.size() == 13);
  const auto adj = [&](int d) {
    for (const auto& r : sweep.rows) {
      if (r.degree == d) return r.outcome.report.adjusted_r_squared;
    }
    FAIL("degree missing");
    return 0.0;
  };
  CHECK(adj(10) >= adj(2) + 0.05);
  CHECK(adj(34) < 0.5);
  CHECK(sweep.rows.back().outcome.conditioning_warning);
  CHECK(sweep.collapse_degree.has_value());

  // Training MSE is non-increasing until the first conditioning warning.
  double prev = 1e300;
  for (const auto& r : sweep.rows) {
    if (r.outcome.conditioning_warning) break;
    CHECK(r.outcome.train_mse <= prev + 1e-8);
    prev = r.outcome.train_mse;
  }

  ExperimentConfig serial = cfg;
  serial.jobs = 1;
  const auto again = run_sweep(income(), price(), spec_for(Technique::LinearInterp), serial);
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    CHECK(again.rows[i].outcome.report == sweep.rows[i].outcome.report);
  }
}

TEST_CASE("locate_peak_and_collapse") {
  SweepResult s;
  for (auto [d, a] : {std::pair{2, 0.70}, {3, 0.80}, {4, 0.75}, {5, 0.69}, {6, 0.2}}) {
    SweepRow row;
    row.degree = d;
    row.outcome.report.adjusted_r_squared = a;
    s.rows.push_back(row);
  }
  locate_peak_and_collapse(s, 0.10);
  CHECK(s.peak_degree == 3);
  REQUIRE(s.collapse_degree.has_value());
  CHECK(*s.collapse_degree == 5);
  locate_peak_and_collapse(s, 0.7);
  CHECK_FALSE(s.collapse_degree.has_value());
}
