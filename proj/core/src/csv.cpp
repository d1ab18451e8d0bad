#include "bmdl/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "bmdl/errors.hpp"

namespace bmdl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    cells.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return cells;
}

double parse_number(const std::string& cell, int line) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end)
    throw ParseError("could not parse value '" + cell + "'", line);
  if (!std::isfinite(v))
    throw ParseError("non-finite value '" + cell + "'", line);
  return v;
}

YearMonth parse_month(const std::string& cell, int line) {
  const auto digit = [](char c) { return c >= '0' && c <= '9'; };
  const bool shaped = cell.size() == 7 && cell[4] == '-' &&
                      std::all_of(cell.begin(), cell.begin() + 4, digit) &&
                      digit(cell[5]) && digit(cell[6]);
  if (!shaped)
    throw ParseError("expected date as YYYY-MM, got '" + cell + "'", line);
  const int year = std::stoi(cell.substr(0, 4));
  const int month = std::stoi(cell.substr(5, 2));
  if (month < 1 || month > 12)
    throw ParseError("month out of range in '" + cell + "'", line);
  return {year, month};
}

}  // namespace

std::vector<ParsedSeries> parse_csv(std::istream& in, int period) {
  std::vector<std::string> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    lines.push_back(raw);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("input is empty");

  const std::vector<std::string> header = split(lines[0]);
  const bool bare = header.size() == 1 && header[0] == "value";
  const bool dated = header.size() >= 2 && header[0] == "date";
  if (!bare && !dated)
    throw ParseError(
        "header must be 'value', 'date,value', or 'date,name1,name2,...'", 1);

  std::vector<ParsedSeries> out;
  if (bare) {
    out.push_back({"", TimeSeries{{}, period, std::nullopt}});
  } else {
    for (std::size_t c = 1; c < header.size(); ++c) {
      if (header[c].empty())
        throw ParseError("empty series name in header", 1);
      for (std::size_t d = 1; d < c; ++d)
        if (header[d] == header[c])
          throw ParseError("duplicate series name '" + header[c] + "'", 1);
      out.push_back({header[c], TimeSeries{{}, period, std::nullopt}});
    }
  }

  std::optional<YearMonth> start;
  int rows = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    const std::vector<std::string> cells = split(lines[i]);
    if (cells.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) +
                           " cells, got " + std::to_string(cells.size()),
                       line);
    std::size_t first_value = 0;
    if (dated) {
      const YearMonth ym = parse_month(cells[0], line);
      if (!start)
        start = ym;
      else if (!(ym == start->plus(rows)))
        throw ParseError("dates must advance by one month; expected " +
                             start->plus(rows).str() + ", got '" + cells[0] +
                             "'",
                         line);
      first_value = 1;
    }
    for (std::size_t c = first_value; c < cells.size(); ++c)
      out[c - first_value].series.values.push_back(
          parse_number(cells[c], line));
    ++rows;
  }
  if (rows == 0) throw ParseError("input has no data rows");
  if (dated)
    for (ParsedSeries& s : out) s.series.start = start;
  return out;
}

std::vector<ParsedSeries> parse_csv_file(const std::string& path, int period) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_csv(in, period);
}

}  // namespace bmdl
