#include "finprep/series.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "finprep/error.hpp"

namespace finprep {

namespace chr = std::chrono;

CivilDate::CivilDate(int year, unsigned month, unsigned day)
    : year_(year), month_(month), day_(day) {
  const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
  if (!ymd.ok()) {
    throw ParseError("invalid calendar date " + std::to_string(year) + "-" +
                     std::to_string(month) + "-" + std::to_string(day));
  }
}

CivilDate CivilDate::from_ordinal(std::int64_t days_since_epoch) {
  const chr::sys_days sd{chr::days{days_since_epoch}};
  const chr::year_month_day ymd{sd};
  return CivilDate(static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                   static_cast<unsigned>(ymd.day()));
}

namespace {

bool parse_uint(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

CivilDate CivilDate::parse(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_uint(text.substr(0, 4), y) ||
      !parse_uint(text.substr(5, 2), m) || !parse_uint(text.substr(8, 2), d)) {
    throw ParseError("malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
  }
  return CivilDate(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string CivilDate::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year_, month_, day_);
  return buf;
}

std::int64_t date_to_ordinal(const CivilDate& d) {
  const chr::year_month_day ymd{chr::year{d.year()}, chr::month{d.month()}, chr::day{d.day()}};
  return chr::sys_days{ymd}.time_since_epoch().count();
}

std::vector<CivilDate> daily_calendar(const CivilDate& start, const CivilDate& end) {
  if (end < start) {
    throw RangeError("daily_calendar: start " + start.iso() + " is after end " + end.iso());
  }
  const auto first = date_to_ordinal(start);
  const auto last = date_to_ordinal(end);
  std::vector<CivilDate> out;
  out.reserve(static_cast<std::size_t>(last - first + 1));
  for (auto o = first; o <= last; ++o) out.push_back(CivilDate::from_ordinal(o));
  return out;
}

TimeSeries::TimeSeries(std::string name, std::vector<Observation> observations, std::string unit)
    : name_(std::move(name)), obs_(std::move(observations)), unit_(std::move(unit)) {
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    if (!std::isfinite(obs_[i].value)) {
      throw NumericError("series '" + name_ + "': non-finite value at " + obs_[i].date.iso());
    }
    if (i > 0 && !(obs_[i - 1].date < obs_[i].date)) {
      throw Error("series '" + name_ + "': dates not strictly increasing at " +
                  obs_[i].date.iso());
    }
  }
}

std::vector<double> TimeSeries::values() const {
  std::vector<double> v;
  v.reserve(obs_.size());
  for (const auto& o : obs_) v.push_back(o.value);
  return v;
}

std::vector<std::int64_t> TimeSeries::ordinals() const {
  std::vector<std::int64_t> v;
  v.reserve(obs_.size());
  for (const auto& o : obs_) v.push_back(date_to_ordinal(o.date));
  return v;
}

AlignedDataset::AlignedDataset(std::vector<AlignedRow> rows, std::string x_name, std::string y_name)
    : rows_(std::move(rows)), x_name_(std::move(x_name)), y_name_(std::move(y_name)) {
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    if (!(rows_[i - 1].date < rows_[i].date)) {
      throw Error("aligned dataset: dates not strictly increasing at " + rows_[i].date.iso());
    }
  }
}

std::vector<double> AlignedDataset::xs() const {
  std::vector<double> v;
  v.reserve(rows_.size());
  for (const auto& r : rows_) v.push_back(r.x);
  return v;
}

std::vector<double> AlignedDataset::ys() const {
  std::vector<double> v;
  v.reserve(rows_.size());
  for (const auto& r : rows_) v.push_back(r.y);
  return v;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

}  // namespace

TimeSeries parse_csv(std::istream& source, std::string_view value_column, ParseStats* stats) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t date_idx = 0, value_idx = 0;
  bool have_header = false;
  std::vector<Observation> obs;
  ParseStats local;

  while (std::getline(source, line)) {
    ++lineno;
    std::string_view view = line;
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto cells = split_commas(view);

    if (!have_header) {
      bool found_date = false, found_value = false;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "date" && !found_date) {
          date_idx = i;
          found_date = true;
        } else if (cells[i] == value_column && !found_value) {
          value_idx = i;
          found_value = true;
        }
      }
      if (!found_date || !found_value) {
        throw ParseError("header must contain 'date' and '" + std::string(value_column) + "'",
                         lineno);
      }
      have_header = true;
      continue;
    }

    if (cells.size() <= std::max(date_idx, value_idx)) {
      throw ParseError("expected at least " + std::to_string(std::max(date_idx, value_idx) + 1) +
                           " columns",
                       lineno);
    }
    CivilDate date;
    try {
      date = CivilDate::parse(cells[date_idx]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    ++local.rows_read;
    const auto cell = cells[value_idx];
    if (cell.empty()) {
      ++local.blank_values_skipped;
      continue;
    }
    double value = 0.0;
    std::string_view num = cell;
    if (num.starts_with('+')) num.remove_prefix(1);
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc{} || p != num.data() + num.size() || !std::isfinite(value)) {
      throw ParseError("non-numeric value '" + std::string(cell) + "'", lineno);
    }
    obs.push_back({date, value});
  }
  if (!have_header) throw ParseError("missing header row");

  std::stable_sort(obs.begin(), obs.end(),
                   [](const Observation& a, const Observation& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < obs.size(); ++i) {
    if (obs[i].date == obs[i - 1].date) {
      throw ParseError("duplicate date " + obs[i].date.iso());
    }
  }
  if (stats) *stats = local;
  return TimeSeries(std::string(value_column), std::move(obs));
}

TimeSeries parse_csv_file(const std::string& path, std::string_view value_column,
                          ParseStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return parse_csv(in, value_column, stats);
}

namespace {

std::string format_full(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

void write_csv(std::ostream& out, const TimeSeries& ts) {
  out << "date," << (ts.name().empty() ? "value" : ts.name()) << '\n';
  for (const auto& o : ts.observations()) out << o.date.iso() << ',' << format_full(o.value) << '\n';
}

void write_csv(std::ostream& out, const AlignedDataset& ds) {
  out << "date,x,y\n";
  for (const auto& r : ds.rows()) {
    out << r.date.iso() << ',' << format_full(r.x) << ',' << format_full(r.y) << '\n';
  }
}

AlignedDataset inner_join(const TimeSeries& a, const TimeSeries& b, bool* empty_warning) {
  std::vector<AlignedRow> rows;
  const auto& ao = a.observations();
  const auto& bo = b.observations();
  std::size_t i = 0, j = 0;
  while (i < ao.size() && j < bo.size()) {
    if (ao[i].date < bo[j].date) {
      ++i;
    } else if (bo[j].date < ao[i].date) {
      ++j;
    } else {
      rows.push_back({ao[i].date, ao[i].value, bo[j].value});
      ++i;
      ++j;
    }
  }
  if (empty_warning) *empty_warning = rows.empty();
  return AlignedDataset(std::move(rows), a.name(), b.name());
}

}  // namespace finprep
