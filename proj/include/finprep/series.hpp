#pragma once

#include <compare>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace finprep {

/// Proleptic Gregorian civil date, no timezone.
class CivilDate {
 public:
  CivilDate() = default;
  /// Throws ParseError if the triple is not a valid calendar date.
  CivilDate(int year, unsigned month, unsigned day);

  static CivilDate from_ordinal(std::int64_t days_since_epoch);
  /// Strict `YYYY-MM-DD`.
  static CivilDate parse(std::string_view text);

  int year() const noexcept { return year_; }
  unsigned month() const noexcept { return month_; }
  unsigned day() const noexcept { return day_; }

  std::string iso() const;

  auto operator<=>(const CivilDate&) const = default;

 private:
  int year_ = 1970;
  unsigned month_ = 1;
  unsigned day_ = 1;
};

/// Days elapsed since 1970-01-01 (negative before).
std::int64_t date_to_ordinal(const CivilDate& d);

/// Every calendar day from start to end inclusive. Throws RangeError if start > end.
std::vector<CivilDate> daily_calendar(const CivilDate& start, const CivilDate& end);

struct Observation {
  CivilDate date;
  double value = 0.0;
  bool operator==(const Observation&) const = default;
};

/// Ordered observations of one variable. Dates strictly increase and values are finite;
/// the constructor enforces both.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::string name, std::vector<Observation> observations, std::string unit = {});

  const std::string& name() const noexcept { return name_; }
  const std::string& unit() const noexcept { return unit_; }
  const std::vector<Observation>& observations() const noexcept { return obs_; }
  std::size_t size() const noexcept { return obs_.size(); }
  bool empty() const noexcept { return obs_.empty(); }
  const Observation& operator[](std::size_t i) const { return obs_[i]; }
  const CivilDate& front_date() const { return obs_.front().date; }
  const CivilDate& back_date() const { return obs_.back().date; }

  std::vector<double> values() const;
  std::vector<std::int64_t> ordinals() const;

  bool operator==(const TimeSeries&) const = default;

 private:
  std::string name_;
  std::vector<Observation> obs_;
  std::string unit_;
};

struct AlignedRow {
  CivilDate date;
  double x = 0.0;
  double y = 0.0;
  bool operator==(const AlignedRow&) const = default;
};

/// Date-keyed (x, y) pairs; the regression input.
class AlignedDataset {
 public:
  AlignedDataset() = default;
  AlignedDataset(std::vector<AlignedRow> rows, std::string x_name, std::string y_name);

  const std::vector<AlignedRow>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  const std::string& x_name() const noexcept { return x_name_; }
  const std::string& y_name() const noexcept { return y_name_; }

  std::vector<double> xs() const;
  std::vector<double> ys() const;

  bool operator==(const AlignedDataset&) const = default;

 private:
  std::vector<AlignedRow> rows_;
  std::string x_name_;
  std::string y_name_;
};

struct ParseStats {
  std::size_t rows_read = 0;
  std::size_t blank_values_skipped = 0;
};

/// Reads a `date,<value_column>` CSV. Rows with an empty value cell are skipped and
/// counted in `stats`; malformed dates or numbers and duplicate dates throw ParseError.
TimeSeries parse_csv(std::istream& source, std::string_view value_column,
                     ParseStats* stats = nullptr);
TimeSeries parse_csv_file(const std::string& path, std::string_view value_column,
                          ParseStats* stats = nullptr);

/// Writes `date,<name>` with round-trip precision.
void write_csv(std::ostream& out, const TimeSeries& ts);
/// Writes the `date,x,y` dataset format.
void write_csv(std::ostream& out, const AlignedDataset& ds);

/// Rows for dates present in both series, x from `a`, y from `b`. An empty result is
/// legal; `empty_warning` is set when it happens.
AlignedDataset inner_join(const TimeSeries& a, const TimeSeries& b, bool* empty_warning = nullptr);

}  // namespace finprep
