#pragma once

#include <istream>
#include <string>
#include <vector>

#include "bmdl/time_series.hpp"

namespace bmdl {

struct ParsedSeries {
  std::string name;  // column header; empty for the bare `value` format
  TimeSeries series;
};

// Strict CSV reader for three layouts, told apart by the required header row:
//   value                 one undated series
//   date,value            one monthly series, dates as YYYY-MM
//   date,name1,name2,...  several monthly series sharing one date column
// Dates must advance by exactly one month per row; every cell must parse as a
// finite number. Violations throw ParseError with the 1-based line number.
std::vector<ParsedSeries> parse_csv(std::istream& in, int period = 12);

// parse_csv over a file; unreadable paths throw ParseError (line 0).
std::vector<ParsedSeries> parse_csv_file(const std::string& path,
                                         int period = 12);

}  // namespace bmdl
