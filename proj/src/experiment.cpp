#include "finprep/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "finprep/error.hpp"

namespace finprep {

std::string_view model_label(ModelKind k) {
  return k == ModelKind::Linear ? "Linear" : "Polynomial";
}

std::vector<PreprocessSpec> ExperimentConfig::default_techniques() {
  std::vector<PreprocessSpec> out;
  for (auto t : kAllTechniques) {
    PreprocessSpec s;
    s.technique = t;
    out.push_back(s);
  }
  return out;
}

std::vector<int> ExperimentConfig::default_sweep_degrees() {
  return {2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 32, 33, 34};
}

void ExperimentConfig::validate() const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must lie in (0, 1)");
  }
  if (cv_folds < 2) throw std::invalid_argument("cv_folds must be >= 2");
  if (linear_degree < 1 || polynomial_degree < 1) {
    throw std::invalid_argument("model degrees must be >= 1");
  }
  for (std::size_t i = 0; i < sweep_degrees.size(); ++i) {
    if (sweep_degrees[i] < 1) throw std::invalid_argument("sweep degrees must be >= 1");
    if (i > 0 && sweep_degrees[i] <= sweep_degrees[i - 1]) {
      throw std::invalid_argument("sweep degrees must be strictly increasing");
    }
  }
  if (!(collapse_threshold > 0.0)) throw std::invalid_argument("collapse_threshold must be > 0");
  for (const auto& t : techniques) t.validate();
}

namespace {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Each index writes only its own
/// slot, so the result is the same for every schedule.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct PreparedSplit {
  std::vector<double> x_train, y_train, x_test, y_test;
};

PreparedSplit prepare(const AlignedDataset& ds, const ExperimentConfig& cfg) {
  if (ds.size() < 4) {
    throw NumericError("preprocessing produced " + std::to_string(ds.size()) +
                       " rows; at least 4 are needed");
  }
  const auto split = shuffle_split(ds, SplitSpec{cfg.test_fraction, cfg.seed});
  const auto xs = ds.xs();
  const auto ys = ds.ys();
  return {take(xs, split.train), take(ys, split.train), take(xs, split.test),
          take(ys, split.test)};
}

CellOutcome evaluate_prepared(const PreparedSplit& p, int degree, const ExperimentConfig& cfg) {
  const auto model = fit_model(p.x_train, p.y_train, degree);
  const double cv = cross_val_neg_mse(p.x_train, p.y_train, degree, cfg.cv_folds, cfg.seed);

  std::vector<double> truth, pred;
  truth.reserve(p.x_test.size());
  pred.reserve(p.x_test.size());
  for (std::size_t i = 0; i < p.x_test.size(); ++i) {
    const double yhat = model.predict_scaled(model.x_scaler.apply(p.x_test[i]));
    if (cfg.raw_space_metrics) {
      truth.push_back(p.y_test[i]);
      pred.push_back(model.y_scaler.invert(yhat));
    } else {
      truth.push_back(model.y_scaler.apply(p.y_test[i]));
      pred.push_back(yhat);
    }
  }

  CellOutcome out;
  out.report = build_report(cv, truth, pred, static_cast<std::size_t>(degree) + 1);
  out.conditioning_warning = model.conditioning_warning;
  out.rank = model.rank;
  double sse = 0.0;
  for (std::size_t i = 0; i < p.x_train.size(); ++i) {
    const double e = model.predict_scaled(model.x_scaler.apply(p.x_train[i])) -
                     model.y_scaler.apply(p.y_train[i]);
    sse += e * e;
  }
  out.train_mse = sse / static_cast<double>(p.x_train.size());
  return out;
}

}  // namespace

std::string error_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const RangeError*>(&e)) return "range";
  if (dynamic_cast<const NumericError*>(&e)) return "numeric";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "config";
  return "error";
}

CellOutcome evaluate_dataset(const AlignedDataset& ds, int degree, const ExperimentConfig& cfg) {
  return evaluate_prepared(prepare(ds, cfg), degree, cfg);
}

MetricsReport run_cell(const TimeSeries& income, const TimeSeries& price,
                       const PreprocessSpec& technique, int degree, const ExperimentConfig& cfg) {
  cfg.validate();
  if (degree < 1) throw NumericError("degree must be >= 1");
  return evaluate_dataset(run_preprocess(technique, income, price), degree, cfg).report;
}

std::vector<std::size_t> ComparisonGrid::rank_by_adjusted_r2() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].ok()) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return cells[a].outcome->report.adjusted_r_squared > cells[b].outcome->report.adjusted_r_squared;
  });
  return idx;
}

std::vector<std::size_t> ComparisonGrid::rank_by_validation_mse() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].ok()) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return cells[a].outcome->report.validation_mse > cells[b].outcome->report.validation_mse;
  });
  return idx;
}

const GridCell* ComparisonGrid::find(Technique t, ModelKind k) const {
  for (const auto& c : cells) {
    if (c.technique == t && c.model == k) return &c;
  }
  return nullptr;
}

ComparisonGrid run_comparison(const TimeSeries& income, const TimeSeries& price,
                              const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.techniques.empty()) throw std::invalid_argument("no techniques configured");

  ComparisonGrid grid;
  grid.seed = cfg.seed;
  const auto& techs = cfg.techniques;
  grid.cells.resize(techs.size() * 2);
  std::vector<std::optional<std::size_t>> counts(techs.size());

  parallel_for(techs.size(), cfg.jobs, [&](std::size_t t) {
    GridCell* pair[2] = {&grid.cells[2 * t], &grid.cells[2 * t + 1]};
    pair[0]->technique = pair[1]->technique = techs[t].technique;
    pair[0]->model = ModelKind::Linear;
    pair[1]->model = ModelKind::Polynomial;
    std::optional<PreparedSplit> prepared;
    try {
      const auto ds = run_preprocess(techs[t], income, price);
      counts[t] = ds.size();
      prepared = prepare(ds, cfg);
    } catch (const std::exception& e) {
      for (auto* c : pair) {
        c->error_code = error_code_for(e);
        c->error_message = e.what();
      }
      return;
    }
    for (auto* c : pair) {
      try {
        c->outcome = evaluate_prepared(*prepared, cfg.degree_for(c->model), cfg);
      } catch (const std::exception& e) {
        c->error_code = error_code_for(e);
        c->error_message = e.what();
      }
    }
  });

  for (std::size_t t = 0; t < techs.size(); ++t) {
    if (counts[t]) grid.row_counts[techs[t].technique] = *counts[t];
  }
  return grid;
}

void locate_peak_and_collapse(SweepResult& sweep, double collapse_threshold) {
  sweep.peak_degree = 0;
  sweep.collapse_degree.reset();
  double best = -std::numeric_limits<double>::infinity();
  double running = -std::numeric_limits<double>::infinity();
  for (const auto& row : sweep.rows) {
    const double adj = row.outcome.report.adjusted_r_squared;
    if (adj > best) {
      best = adj;
      sweep.peak_degree = row.degree;
    }
    if (!sweep.collapse_degree && adj < running - collapse_threshold) {
      sweep.collapse_degree = row.degree;
    }
    running = std::max(running, adj);
  }
}

SweepResult run_sweep(const TimeSeries& income, const TimeSeries& price,
                      const PreprocessSpec& technique, const ExperimentConfig& cfg) {
  cfg.validate();
  technique.validate();
  const auto prepared = prepare(run_preprocess(technique, income, price), cfg);

  SweepResult sweep;
  sweep.technique = technique.technique;
  sweep.seed = cfg.seed;
  sweep.rows.resize(cfg.sweep_degrees.size());
  parallel_for(cfg.sweep_degrees.size(), cfg.jobs, [&](std::size_t i) {
    sweep.rows[i].degree = cfg.sweep_degrees[i];
    sweep.rows[i].outcome = evaluate_prepared(prepared, cfg.sweep_degrees[i], cfg);
  });
  locate_peak_and_collapse(sweep, cfg.collapse_threshold);
  return sweep;
}

}  // namespace finprep
