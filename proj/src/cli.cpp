#include "finprep/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "finprep/error.hpp"
#include "finprep/report.hpp"

#ifndef FINPREP_DATA_DIR
#define FINPREP_DATA_DIR "data"
#endif

namespace finprep {

namespace {

using nlohmann::json;

PreprocessSpec technique_from_json(const json& j) {
  PreprocessSpec s;
  auto name_of = [](const json& v) {
    const auto name = v.get<std::string>();
    const auto t = parse_technique(name);
    if (!t) throw std::invalid_argument("unknown technique '" + name + "'");
    return *t;
  };
  if (j.is_string()) {
    s.technique = name_of(j);
    return s;
  }
  if (!j.is_object() || !j.contains("technique")) {
    throw std::invalid_argument("technique entries must be names or objects with 'technique'");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "technique") {
      s.technique = name_of(value);
    } else if (key == "lag_steps") {
      s.lag_steps = value.get<int>();
    } else if (key == "polynomial_fit_degree") {
      s.polynomial_fit_degree = value.get<int>();
    } else if (key == "quadratic_window") {
      s.quadratic_window = value.get<int>();
    } else {
      throw std::invalid_argument("unknown technique key '" + key + "'");
    }
  }
  s.validate();
  return s;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig cfg) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "test_fraction") {
        cfg.test_fraction = value.get<double>();
      } else if (key == "cv_folds") {
        cfg.cv_folds = value.get<int>();
      } else if (key == "techniques") {
        cfg.techniques.clear();
        for (const auto& t : value) cfg.techniques.push_back(technique_from_json(t));
      } else if (key == "sweep_degrees") {
        cfg.sweep_degrees = value.get<std::vector<int>>();
      } else if (key == "collapse_threshold") {
        cfg.collapse_threshold = value.get<double>();
      } else if (key == "linear_degree") {
        cfg.linear_degree = value.get<int>();
      } else if (key == "polynomial_degree") {
        cfg.polynomial_degree = value.get<int>();
      } else if (key == "raw_space_metrics") {
        cfg.raw_space_metrics = value.get<bool>();
      } else if (key == "jobs") {
        cfg.jobs = value.get<int>();
      } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config has a wrong value type: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

namespace {

struct GlobalOptions {
  std::string income = std::string(FINPREP_DATA_DIR) + "/apple_quarterly_income.csv";
  std::string price = std::string(FINPREP_DATA_DIR) + "/aapl_daily_close.csv";
  std::string income_column = "value";
  std::string price_column = "close";
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
  std::string format = "markdown";
  bool full_precision = false;
  bool raw_space = false;
  std::optional<int> jobs;
};

struct CellOptions {
  std::string technique = "linear";
  int degree = 2;
  std::optional<int> lag;
  std::optional<int> window;
  std::string series;
  std::vector<int> degrees;
  std::string url;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PreprocessSpec technique_spec(const CellOptions& c) {
  const auto t = parse_technique(c.technique);
  if (!t) throw UsageError("unknown technique '" + c.technique + "'");
  PreprocessSpec s;
  s.technique = *t;
  if (c.lag) s.lag_steps = *c.lag;
  if (c.window) s.quadratic_window = *c.window;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return s;
}

struct Inputs {
  TimeSeries income;
  TimeSeries price;
};

Inputs load_inputs(const GlobalOptions& g, std::ostream& err) {
  ParseStats si, sp;
  Inputs in{parse_csv_file(g.income, g.income_column, &si),
            parse_csv_file(g.price, g.price_column, &sp)};
  in.income = TimeSeries("income", in.income.observations(), "USD million");
  in.price = TimeSeries("close", in.price.observations(), "USD");
  if (si.blank_values_skipped) {
    err << "warning: " << g.income << ": skipped " << si.blank_values_skipped
        << " rows with empty values\n";
  }
  if (sp.blank_values_skipped) {
    err << "warning: " << g.price << ": skipped " << sp.blank_values_skipped
        << " rows with empty values\n";
  }
  return in;
}

void emit(const GlobalOptions& g, std::ostream& out, const std::string& text) {
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + g.out);
  f << text;
  if (!f) throw IoError("write to " + g.out + " failed");
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Align quarterly fundamentals with daily prices and compare regression pipelines",
               "finprep"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  CellOptions c;
  app.add_option("--income", g.income, "Quarterly income CSV");
  app.add_option("--price", g.price, "Daily close price CSV");
  app.add_option("--income-column", g.income_column, "Value column in the income CSV");
  app.add_option("--price-column", g.price_column, "Value column in the price CSV");
  app.add_option("--seed", g.seed, "Shuffle seed (default 42)");
  app.add_option("--config", g.config, "JSON run configuration");
  app.add_option("--out", g.out, "Write output here instead of stdout");
  app.add_option("--format", g.format, "csv or markdown")->check(CLI::IsMember({"csv", "markdown"}));
  app.add_flag("--full-precision", g.full_precision, "Print shortest round-trip values");
  app.add_flag("--raw-space", g.raw_space, "Score in raw price units instead of z-scores");
  app.add_option("--jobs", g.jobs, "Worker threads (output is identical for any value)")
      ->check(CLI::PositiveNumber);

  auto* preprocess = app.add_subcommand("preprocess", "Emit the aligned date,x,y dataset");
  auto* fit = app.add_subcommand("fit", "Evaluate one technique/degree cell");
  auto* compare = app.add_subcommand("compare", "Technique x model comparison grid");
  auto* sweep = app.add_subcommand("sweep", "Polynomial degree sweep");
  auto* plot = app.add_subcommand("plot", "SVG plot of a fitted cell or a raw series");
  auto* fetch = app.add_subcommand("fetch", "Download a CSV over HTTP(S)");

  for (auto* sc : {preprocess, fit, sweep, plot}) {
    sc->add_option("--technique", c.technique,
                   "aggregation | linear | quadratic | spline | lagged");
    sc->add_option("--lag", c.lag, "Lag steps for the lagged technique");
    sc->add_option("--window", c.window, "Knots per local quadratic fit (0 = global)");
  }
  for (auto* sc : {fit, plot}) sc->add_option("--degree", c.degree, "Polynomial degree");
  sweep->add_option("--degrees", c.degrees, "Comma-separated degrees")->delimiter(',');
  plot->add_option("--series", c.series, "Plot a raw series instead: income | price")
      ->check(CLI::IsMember({"income", "price"}));
  fetch->add_option("url", c.url, "http(s) URL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  const TableOptions topt{g.format == "csv" ? TableFormat::Csv : TableFormat::Markdown,
                          g.full_precision};
  try {
    ExperimentConfig cfg;
    if (!g.config.empty()) {
      std::ifstream f(g.config);
      if (!f) throw UsageError("cannot read config " + g.config);
      std::stringstream ss;
      ss << f.rdbuf();
      cfg = parse_config(ss.str());
    }
    if (g.seed) cfg.seed = *g.seed;
    if (g.jobs) cfg.jobs = *g.jobs;
    if (g.raw_space) cfg.raw_space_metrics = true;
    if (!c.degrees.empty()) cfg.sweep_degrees = c.degrees;
    if (fit->parsed() || plot->parsed()) {
      if (c.degree < 1) throw UsageError("--degree must be >= 1");
    }
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }

    if (fetch->parsed()) {
      if (g.out.empty()) throw UsageError("fetch needs --out <path>");
      fetch_csv(c.url, g.out);
      err << "saved " << c.url << " -> " << g.out << '\n';
      return 0;
    }

    const auto in = load_inputs(g, err);

    if (preprocess->parsed()) {
      const auto ds = run_preprocess(technique_spec(c), in.income, in.price);
      if (ds.empty()) err << "warning: the join produced no rows\n";
      std::ostringstream s;
      write_csv(s, ds);
      emit(g, out, s.str());
      err << ds.size() << " rows\n";
      return 0;
    }
    if (fit->parsed()) {
      const auto spec = technique_spec(c);
      const auto ds = run_preprocess(spec, in.income, in.price);
      const auto cell = evaluate_dataset(ds, c.degree, cfg);
      const std::string model = c.degree == 1 ? "Linear" : "Polynomial (degree " +
                                                               std::to_string(c.degree) + ")";
      std::string text = render_report(spec.technique, model, cell.report, topt);
      if (topt.format == TableFormat::Markdown) {
        std::ostringstream s;
        s << "\nrows: " << ds.size() << "; n_test: " << cell.report.n_test
          << "; n_predictors: " << cell.report.n_predictors << "; seed: " << cfg.seed
          << "; conditioning warning: " << (cell.conditioning_warning ? "yes" : "no") << '\n';
        text += s.str();
      } else {
        err << "rows: " << ds.size() << "; n_test: " << cell.report.n_test
            << "; n_predictors: " << cell.report.n_predictors << "; seed: " << cfg.seed << '\n';
      }
      if (cell.conditioning_warning) err << "warning: design matrix is rank-deficient\n";
      emit(g, out, text);
      return 0;
    }
    if (compare->parsed()) {
      const auto grid = run_comparison(in.income, in.price, cfg);
      std::string text = render_table(grid, topt);
      if (topt.format == TableFormat::Markdown) {
        std::ostringstream s;
        s << "\nRows per technique:";
        for (const auto& t : cfg.techniques) {
          const auto it = grid.row_counts.find(t.technique);
          s << ' ' << technique_key(t.technique) << '='
            << (it == grid.row_counts.end() ? std::string("ERR") : std::to_string(it->second));
        }
        s << "\n\n" << render_ranking(grid);
        text += s.str();
      } else {
        err << "seed: " << cfg.seed << '\n';
      }
      bool failed = false;
      for (const auto& cell : grid.cells) {
        if (!cell.ok()) {
          failed = true;
          err << "error: " << technique_key(cell.technique) << '/' << model_label(cell.model)
              << ": " << cell.error_message << '\n';
        }
      }
      emit(g, out, text);
      return failed ? 2 : 0;
    }
    if (sweep->parsed()) {
      const auto result = run_sweep(in.income, in.price, technique_spec(c), cfg);
      for (const auto& r : result.rows) {
        if (r.outcome.conditioning_warning) {
          err << "warning: degree " << r.degree << " design is rank-deficient (rank "
              << r.outcome.rank << " of " << r.degree + 1 << ")\n";
        }
      }
      if (topt.format == TableFormat::Csv) err << "seed: " << cfg.seed << '\n';
      emit(g, out, render_table(result, topt));
      return 0;
    }
    if (plot->parsed()) {
      PlotSpec spec;
      if (!c.series.empty()) {
        spec = c.series == "income" ? plot_for_series(in.income, "Quarterly net income")
                                    : plot_for_series(in.price, "Daily close price");
      } else {
        const auto tspec = technique_spec(c);
        const auto ds = run_preprocess(tspec, in.income, in.price);
        const auto split = shuffle_split(ds, SplitSpec{cfg.test_fraction, cfg.seed});
        const auto xs = ds.xs(), ys = ds.ys();
        const auto model = fit_model(take(xs, split.train), take(ys, split.train), c.degree);
        spec = plot_for_fit(model, take(xs, split.test), take(ys, split.test),
                            "Polynomial regression (degree " + std::to_string(c.degree) +
                                ") using " + std::string(technique_label(tspec.technique)));
      }
      emit(g, out, emit_svg_plot(spec));
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << app.help();
  return 1;
}

}  // namespace finprep
