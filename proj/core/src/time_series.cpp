#include "bmdl/time_series.hpp"

#include <cstdio>

namespace bmdl {

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

std::string TimeSeries::label(int t) const {
  if (start && period == 12) return start->plus(t - 1).str();
  return std::to_string(t);
}

TimeSeries TimeSeries::prefix(int h) const {
  TimeSeries out = *this;
  out.values.resize(static_cast<std::size_t>(h));
  return out;
}

}  // namespace bmdl
