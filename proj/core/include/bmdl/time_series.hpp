#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bmdl {

// Calendar month, used for human-readable changepoint labels.
struct YearMonth {
  int year = 0;
  int month = 1;  // 1..12

  YearMonth plus(int months) const {
    const int total = year * 12 + (month - 1) + months;
    const int y = total >= 0 ? total / 12 : -((-total + 11) / 12);
    return {y, total - y * 12 + 1};
  }
  std::string str() const;  // "2013-05"
  bool operator==(const YearMonth&) const = default;
};

// Observed univariate series. Time indices are 1-based throughout: at(1) is
// the first observation and at(n()) the last.
struct TimeSeries {
  std::vector<double> values;
  int period = 12;                 // observations per seasonal cycle
  std::optional<YearMonth> start;  // calendar position of t = 1

  int n() const { return static_cast<int>(values.size()); }
  double at(int t) const { return values[static_cast<std::size_t>(t) - 1]; }

  // Calendar label when the series is monthly and dated, else the bare index.
  std::string label(int t) const;

  // Copy of observations 1..h.
  TimeSeries prefix(int h) const;
};

}  // namespace bmdl
