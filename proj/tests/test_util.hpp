#pragma once

#include <string>
#include <utility>
#include <vector>

#include "finprep/series.hpp"

#ifndef FINPREP_DATA_DIR
#define FINPREP_DATA_DIR "data"
#endif

namespace testutil {

inline std::string income_path() { return std::string(FINPREP_DATA_DIR) + "/apple_quarterly_income.csv"; }
inline std::string price_path() { return std::string(FINPREP_DATA_DIR) + "/aapl_daily_close.csv"; }

inline finprep::TimeSeries income() { return finprep::parse_csv_file(income_path(), "value"); }
inline finprep::TimeSeries price() { return finprep::parse_csv_file(price_path(), "close"); }

/// Series with observations at the given ordinal days.
inline finprep::TimeSeries at_days(const std::vector<std::pair<long, double>>& pts,
                                   std::string name = "s") {
  std::vector<finprep::Observation> obs;
  for (const auto& [day, v] : pts) obs.push_back({finprep::CivilDate::from_ordinal(day), v});
  return finprep::TimeSeries(std::move(name), std::move(obs));
}

inline std::vector<finprep::CivilDate> days(std::initializer_list<long> ords) {
  std::vector<finprep::CivilDate> out;
  for (long o : ords) out.push_back(finprep::CivilDate::from_ordinal(o));
  return out;
}

}  // namespace testutil
