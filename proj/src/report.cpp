#include "finprep/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

namespace finprep {

std::string format_fixed5(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

namespace {

const char* const kMetricHeaders[] = {"Validation MSE", "MSE", "MAE", "RMSE", "R-squared",
                                      "Adjusted R-squared"};

std::string format_value(double v, const TableOptions& opt) {
  if (!opt.full_precision) return format_fixed5(v);
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::vector<std::string> metric_cells(const MetricsReport& r, const TableOptions& opt) {
  return {format_value(r.validation_mse, opt), format_value(r.mse, opt),
          format_value(r.mae, opt),            format_value(r.rmse, opt),
          format_value(r.r_squared, opt),      format_value(r.adjusted_r_squared, opt)};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class TableWriter {
 public:
  explicit TableWriter(TableFormat f) : format_(f) {}

  void row(const std::vector<std::string>& cells) {
    if (format_ == TableFormat::Csv) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(cells[i]);
      }
      out_ << '\n';
      return;
    }
    out_ << '|';
    for (const auto& c : cells) out_ << ' ' << c << " |";
    out_ << '\n';
    if (!header_done_) {
      out_ << '|';
      for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i < 2 ? "---|" : "---:|");
      out_ << '\n';
      header_done_ = true;
    }
  }

  std::ostringstream& stream() { return out_; }
  std::string str() const { return out_.str(); }

 private:
  TableFormat format_;
  bool header_done_ = false;
  std::ostringstream out_;
};

std::vector<std::string> header(std::string first, std::string second) {
  std::vector<std::string> h{std::move(first), std::move(second)};
  for (const char* m : kMetricHeaders) h.emplace_back(m);
  return h;
}

}  // namespace

std::string render_table(const ComparisonGrid& grid, const TableOptions& opt) {
  TableWriter w(opt.format);
  w.row(header("Data processing technique", "Regression models"));
  for (const auto& cell : grid.cells) {
    std::vector<std::string> row{std::string(technique_label(cell.technique)),
                                 std::string(model_label(cell.model))};
    if (cell.ok()) {
      for (auto& c : metric_cells(cell.outcome->report, opt)) row.push_back(std::move(c));
    } else {
      for (int i = 0; i < 6; ++i) row.push_back("ERR(" + cell.error_code + ")");
    }
    w.row(row);
  }
  return w.str();
}

std::string render_table(const SweepResult& sweep, const TableOptions& opt) {
  TableWriter w(opt.format);
  auto h = header("Model", "Degree");
  h.emplace_back("Conditioning warning");
  w.row(h);
  for (const auto& r : sweep.rows) {
    std::vector<std::string> row{"polynomial regression", std::to_string(r.degree)};
    for (auto& c : metric_cells(r.outcome.report, opt)) row.push_back(std::move(c));
    row.emplace_back(r.outcome.conditioning_warning
                         ? "rank " + std::to_string(r.outcome.rank) + "/" +
                               std::to_string(r.degree + 1)
                         : "no");
    w.row(row);
  }
  if (opt.format == TableFormat::Markdown) {
    auto& out = w.stream();
    out << "\nTechnique: " << technique_label(sweep.technique) << "; seed: " << sweep.seed
        << "; peak degree: " << sweep.peak_degree << "; collapse degree: ";
    if (sweep.collapse_degree) {
      out << *sweep.collapse_degree;
    } else {
      out << "none";
    }
    out << '\n';
  }
  return w.str();
}

std::string render_report(Technique t, std::string_view model, const MetricsReport& r,
                          const TableOptions& opt) {
  TableWriter w(opt.format);
  w.row(header("Data processing technique", "Regression models"));
  std::vector<std::string> row{std::string(technique_label(t)), std::string(model)};
  for (auto& c : metric_cells(r, opt)) row.push_back(std::move(c));
  w.row(row);
  return w.str();
}

std::string render_ranking(const ComparisonGrid& grid) {
  std::ostringstream out;
  auto list = [&](const char* title, const std::vector<std::size_t>& order, bool by_adj) {
    out << title << '\n';
    int rank = 1;
    for (auto i : order) {
      const auto& c = grid.cells[i];
      const auto& r = c.outcome->report;
      out << rank++ << ". " << technique_label(c.technique) << " / " << model_label(c.model)
          << " (" << format_fixed5(by_adj ? r.adjusted_r_squared : r.validation_mse) << ")\n";
    }
  };
  list("Ranking by adjusted R-squared:", grid.rank_by_adjusted_r2(), true);
  out << '\n';
  list("Ranking by validation MSE:", grid.rank_by_validation_mse(), false);
  out << "\nSeed: " << grid.seed << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    double span = hi - lo;
    if (span <= 0.0) span = std::max(std::abs(lo), 1.0);
    lo -= 0.05 * span;
    hi += 0.05 * span;
  }
};

}  // namespace

std::string emit_svg_plot(const PlotSpec& spec) {
  if (spec.points.empty() && spec.curve.empty()) {
    throw NumericError("plot has neither points nor curve");
  }
  Range xr, yr;
  for (const auto& p : spec.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw NumericError("non-finite plot point");
    xr.add(p.x);
    yr.add(p.y);
  }
  for (std::size_t i = 0; i < spec.curve.size(); ++i) {
    const auto& p = spec.curve[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw NumericError("non-finite curve point");
    if (i > 0 && !(spec.curve[i - 1].x < p.x)) {
      throw NumericError("curve x-values must be strictly increasing");
    }
    xr.add(p.x);
    yr.add(p.y);
  }
  xr.pad();
  yr.pad();

  const double left = 70, right = 20, top = 40, bottom = 50;
  const double w = spec.width, h = spec.height;
  const double pw = w - left - right, ph = h - top - bottom;
  auto sx = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height
      << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << num(w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << xml_escape(spec.title) << "</text>\n";

  // Axes and ticks.
  out << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(left + pw)
      << "\" y2=\"" << num(top + ph) << "\"/>\n"
      << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left)
      << "\" y2=\"" << num(top + ph) << "\"/>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = left + pw * i / kTicks;
    const double fy = top + ph - ph * i / kTicks;
    out << "<line x1=\"" << num(fx) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(fx)
        << "\" y2=\"" << num(top + ph + 5) << "\"/>\n"
        << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(fy) << "\" x2=\"" << num(left)
        << "\" y2=\"" << num(fy) << "\"/>\n";
  }
  out << "</g>\n<g font-size=\"11\" fill=\"black\">\n";
  for (int i = 0; i <= kTicks; ++i) {
    const double vx = xr.lo + (xr.hi - xr.lo) * i / kTicks;
    const double vy = yr.lo + (yr.hi - yr.lo) * i / kTicks;
    out << "<text class=\"xtick\" x=\"" << num(left + pw * i / kTicks) << "\" y=\""
        << num(top + ph + 18) << "\" text-anchor=\"middle\">" << tick_label(vx) << "</text>\n"
        << "<text class=\"ytick\" x=\"" << num(left - 8) << "\" y=\""
        << num(top + ph - ph * i / kTicks + 4) << "\" text-anchor=\"end\">" << tick_label(vy)
        << "</text>\n";
  }
  out << "</g>\n"
      << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(h - 10)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(spec.x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\""
      << " transform=\"rotate(-90 16 " << num(top + ph / 2) << ")\">" << xml_escape(spec.y_label)
      << "</text>\n";

  out << "<g class=\"points\" fill=\"#1f77b4\" fill-opacity=\"0.6\">\n";
  for (const auto& p : spec.points) {
    out << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"2.5\"/>\n";
  }
  out << "</g>\n";
  if (!spec.curve.empty()) {
    out << "<polyline class=\"curve\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < spec.curve.size(); ++i) {
      if (i) out << ' ';
      out << num(sx(spec.curve[i].x)) << ',' << num(sy(spec.curve[i].y));
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

PlotSpec plot_for_fit(const FittedModel& model, std::span<const double> x_test_raw,
                      std::span<const double> y_test_raw, std::string title,
                      std::size_t samples) {
  PlotSpec spec;
  spec.title = std::move(title);
  spec.x_label = "income (standardized)";
  spec.y_label = "close price (standardized)";
  Range xr;
  for (std::size_t i = 0; i < x_test_raw.size(); ++i) {
    const double xs = model.x_scaler.apply(x_test_raw[i]);
    spec.points.push_back({xs, model.y_scaler.apply(y_test_raw[i])});
    xr.add(xs);
  }
  if (x_test_raw.empty() || samples < 2 || !(xr.hi > xr.lo)) return spec;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = xr.lo + (xr.hi - xr.lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    spec.curve.push_back({x, model.predict_scaled(x)});
  }
  return spec;
}

PlotSpec plot_for_series(const TimeSeries& ts, std::string title) {
  PlotSpec spec;
  spec.title = std::move(title);
  spec.x_label = "year";
  spec.y_label = ts.name() + (ts.unit().empty() ? "" : " (" + ts.unit() + ")");
  for (const auto& o : ts.observations()) {
    const auto jan1 = date_to_ordinal(CivilDate(o.date.year(), 1, 1));
    const auto next = date_to_ordinal(CivilDate(o.date.year() + 1, 1, 1));
    const double frac = static_cast<double>(date_to_ordinal(o.date) - jan1) /
                        static_cast<double>(next - jan1);
    spec.curve.push_back({o.date.year() + frac, o.value});
  }
  return spec;
}

// ---------------------------------------------------------------------------
// HTTP download

std::string fetch_csv(const std::string& url, const std::string& destination) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw IoError("malformed URL: " + url);
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw IoError("unsupported URL scheme: " + scheme);
  const auto path_start = url.find('/', scheme_end + 3);
  const auto origin = url.substr(0, path_start);
  const auto path = path_start == std::string::npos ? std::string("/") : url.substr(path_start);
  if (origin.size() <= scheme_end + 3) throw IoError("malformed URL: " + url);

  httplib::Client client(origin);
  client.set_follow_location(true);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);
  auto res = client.Get(path);
  if (!res) {
    throw IoError("request to " + url + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw HttpError(res->status, "HTTP " + std::to_string(res->status) + " from " + url);
  }

  namespace fs = std::filesystem;
  const fs::path dest(destination);
  fs::path tmp = dest;
  tmp += ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(res->body.data(), static_cast<std::streamsize>(res->body.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, dest, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move download into " + destination);
  }
  return destination;
}

}  // namespace finprep
