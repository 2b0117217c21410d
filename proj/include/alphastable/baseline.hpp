#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alphastable/params.hpp"

namespace alphastable::baseline {

/// A table sampled on a rectangular grid, interpolated bilinearly. Lookups
/// outside the grid clamp to its edge.
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(std::vector<double> rows, std::vector<double> cols, std::vector<double> values);

  double operator()(double row, double col) const;

  const std::vector<double>& rows() const noexcept { return rows_; }
  const std::vector<double>& cols() const noexcept { return cols_; }

 private:
  std::vector<double> rows_;
  std::vector<double> cols_;
  std::vector<double> values_;  // row-major
};

/// Lookup tables of the five-quantile estimator, parsed from the text format
/// documented in data/quantile_tables.txt.
struct QuantileTableSet {
  Grid2D psi_alpha;    ///< (nu_alpha, nu_beta) -> alpha
  Grid2D psi_beta;     ///< (nu_alpha, nu_beta) -> beta
  Grid2D nu_scale;     ///< (alpha, beta) -> (q75 - q25) / sigma
  Grid2D nu_location;  ///< (alpha, beta) -> (mu0 - q50) / sigma
  int version = 0;

  static QuantileTableSet parse(std::string_view text);
  static QuantileTableSet load(const std::string& path);
  /// The tables compiled into the library.
  static const QuantileTableSet& builtin();
};

/// Type-7 (linear interpolation) sample quantile of sorted data.
double sample_quantile(std::span<const double> sorted, double level);

/// Five-quantile lookup estimator; S0 parameters. Needs at least 10 points.
StableParams sq_estimate(std::span<const double> data,
                         const QuantileTableSet& tables = QuantileTableSet::builtin());

/// Frequencies of the characteristic-function regressions, applied to data
/// standardised by the quantile estimate.
std::vector<double> default_cf_frequencies();

/// Empirical characteristic function regression estimator (two stages: the
/// modulus for alpha and sigma, the phase for beta and mu0). S0 parameters.
StableParams cf_estimate(std::span<const double> data,
                         std::span<const double> frequencies = {});

}  // namespace alphastable::baseline
