#include "alphastable/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <string_view>

namespace alphastable::io {

ReturnSeries to_returns(const PriceSeries& p) {
  if (p.prices.size() < 2)
    throw DataError(DataErrorKind::EmptySeries, "price series needs at least 2 values");
  for (std::size_t i = 0; i < p.prices.size(); ++i)
    if (!(p.prices[i] > 0.0))
      throw DataError(DataErrorKind::NonPositivePrice,
                      "non-positive price at index " + std::to_string(i));
  ReturnSeries r;
  r.name = p.name;
  r.returns.resize(p.prices.size() - 1);
  for (std::size_t t = 1; t < p.prices.size(); ++t)
    r.returns[t - 1] = (p.prices[t - 1] - p.prices[t]) / p.prices[t - 1];
  return r;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

PriceSeries load_price_csv(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw DataError(DataErrorKind::MissingFile, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw DataError(DataErrorKind::EmptySeries, "empty series: " + path + " has no header");
  const auto header = split(line);
  std::size_t col = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == column) col = j;
  if (col == header.size())
    throw DataError(DataErrorKind::MissingColumn, "column '" + column + "' not found in " + path);

  PriceSeries series;
  series.name = column;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    const auto fail = [&] {
      throw DataError(DataErrorKind::BadCell, path + " line " + std::to_string(line_no) +
                                                  ": cannot parse column '" + column + "'");
    };
    if (col >= cells.size()) fail();
    const std::string_view cell = cells[col];
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) fail();
    series.prices.push_back(value);
  }
  if (series.prices.empty())
    throw DataError(DataErrorKind::EmptySeries, "empty series: no rows in " + path);
  return series;
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

void write_series_csv(const std::string& path, const std::string& name,
                      const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw DataError(DataErrorKind::MissingFile, "cannot write " + path);
  out << name << '\n';
  for (double v : values) out << format_double(v) << '\n';
  if (!out) throw DataError(DataErrorKind::MissingFile, "write failed for " + path);
}

}  // namespace alphastable::io
