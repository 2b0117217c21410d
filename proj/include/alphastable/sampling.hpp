#pragma once

#include <cstddef>
#include <vector>

#include "alphastable/params.hpp"
#include "alphastable/rng.hpp"

namespace alphastable {

/// One draw from S1(alpha, beta, 1, 0) by the Chambers-Mallows-Stuck
/// transform of a uniform angle and a standard exponential.
double draw_standard_stable(double alpha, double beta, RngStream& rng);

/// One draw from the law of p (either tag).
double draw_stable(const StableParams& p, RngStream& rng);

std::vector<double> sample_stable(const StableParams& p, std::size_t n, RngStream& rng);

/// Positive stable variable with Laplace transform exp(-s^a), 0 < a <= 1,
/// i.e. S1(a, 1, cos(pi a / 2)^(1/a), 0). Kanter's form; a == 1 gives 1.
double draw_positive_stable(double a, RngStream& rng);

/// Gaussian mixing weight P of the alpha-stable scale mixture:
/// S1(alpha/2, 1, cos(pi alpha / 4)^(2/alpha), 0).
inline double draw_mixing_weight(double alpha, RngStream& rng) {
  return draw_positive_stable(alpha / 2.0, rng);
}

/// Weibull with shape `shape` and unit scale: density a w^(a-1) exp(-w^a).
double draw_weibull(double shape, RngStream& rng);

/// Draws eta * sqrt(2P) * N + theta * V + mu0 - lambda with independent
/// P, V and standard normal N. Requires S0 parameters. At alpha == 2 the
/// mixing weight is identically one and the draw is mu0 + sigma * sqrt(2) * N.
std::vector<double> sample_representation(const StableParams& p, std::size_t n, RngStream& rng);

}  // namespace alphastable
