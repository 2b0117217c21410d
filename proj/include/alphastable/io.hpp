#pragma once

#include <string>
#include <vector>

#include "alphastable/error.hpp"

namespace alphastable::io {

struct PriceSeries {
  std::string name;
  std::vector<double> prices;
};

struct ReturnSeries {
  std::string name;
  std::vector<double> returns;
};

enum class DataErrorKind { MissingFile, MissingColumn, BadCell, EmptySeries, NonPositivePrice };

class DataError : public Error {
 public:
  DataError(DataErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  DataErrorKind kind() const noexcept { return kind_; }

 private:
  DataErrorKind kind_;
};

/// r_t = (p_{t-1} - p_t) / p_{t-1} for t = 2..n. Note the sign: a rising
/// price gives a negative value.
ReturnSeries to_returns(const PriceSeries& p);

/// Reads one named column of a comma-separated file with a header row.
/// Cells must parse completely as decimal numbers (surrounding quotes and
/// blanks allowed).
PriceSeries load_price_csv(const std::string& path, const std::string& column);

/// Writes a one-column CSV (header = name) with values in shortest
/// round-trip form, so reloading reproduces every value exactly.
void write_series_csv(const std::string& path, const std::string& name,
                      const std::vector<double>& values);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

}  // namespace alphastable::io
