#include "alphastable/goodness_of_fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "alphastable/error.hpp"
#include "alphastable/sampling.hpp"

namespace alphastable {

double ks_two_sample_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("KS statistic needs nonempty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::ranges::sort(x);
  std::ranges::sort(y);
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_one_sample_statistic(std::span<const double> data,
                               const std::function<double(double)>& cdf) {
  if (data.empty()) throw InvalidArgument("KS statistic needs a nonempty sample");
  std::vector<double> x(data.begin(), data.end());
  std::ranges::sort(x);
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_statistic(std::span<const double> data, const StableParams& p,
                    std::size_t cdf_sample_size, RngStream& rng) {
  if (cdf_sample_size == 0) throw InvalidArgument("model CDF sample size must be positive");
  const std::vector<double> model = sample_stable(p, cdf_sample_size, rng);
  return ks_two_sample_statistic(data, model);
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;  // series converges slowly; Q is 1 to double precision here
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * x * x);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue(double statistic, std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * statistic);
}

double ks_pvalue(double statistic, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
  const double rn = std::sqrt(ne);
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * statistic);
}

}  // namespace alphastable
