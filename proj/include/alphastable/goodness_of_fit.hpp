#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "alphastable/params.hpp"
#include "alphastable/rng.hpp"

namespace alphastable {

/// Default size of the Monte Carlo sample standing in for the model CDF.
inline constexpr std::size_t kDefaultCdfSampleSize = 100000;

/// sup |F_data - F_model| with the model CDF replaced by the empirical CDF of
/// `cdf_sample_size` draws from p.
double ks_statistic(std::span<const double> data, const StableParams& p,
                    std::size_t cdf_sample_size, RngStream& rng);

double ks_one_sample_statistic(std::span<const double> data,
                               const std::function<double(double)>& cdf);

double ks_two_sample_statistic(std::span<const double> a, std::span<const double> b);

/// Kolmogorov limiting survival function Q(x) = 2 sum_k (-1)^(k-1) exp(-2 k^2 x^2).
double kolmogorov_survival(double x);

/// Asymptotic p-values with the Stephens small-sample correction.
double ks_pvalue(double statistic, std::size_t n);
double ks_pvalue(double statistic, std::size_t n, std::size_t m);

}  // namespace alphastable
