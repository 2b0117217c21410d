#include "alphastable/sampling.hpp"

#include <cmath>
#include <numbers>

#include "alphastable/error.hpp"

namespace alphastable {

using std::numbers::pi;

double draw_standard_stable(double alpha, double beta, RngStream& rng) {
  const double u = pi * (rng.uniform() - 0.5);  // (-pi/2, pi/2)
  const double w = rng.exponential();
  if (is_unit_alpha(alpha)) {
    const double half_pi = pi / 2.0;
    const double shifted = half_pi + beta * u;
    return (2.0 / pi) *
           (shifted * std::tan(u) - beta * std::log(half_pi * w * std::cos(u) / shifted));
  }
  if (alpha == 2.0) return 2.0 * std::sin(u) * std::sqrt(w);

  const double tan_term = beta * std::tan(pi * alpha / 2.0);
  const double b = std::atan(tan_term) / alpha;
  const double s = std::pow(1.0 + tan_term * tan_term, 1.0 / (2.0 * alpha));
  const double shifted = alpha * (u + b);
  return s * std::sin(shifted) / std::pow(std::cos(u), 1.0 / alpha) *
         std::pow(std::cos(u - shifted) / w, (1.0 - alpha) / alpha);
}

double draw_stable(const StableParams& p, RngStream& rng) {
  const StableParams s1 = convert_parameterization(p, Parameterization::S1);
  const double x = draw_standard_stable(s1.alpha, s1.beta, rng);
  if (is_unit_alpha(s1.alpha))
    return s1.sigma * x + (2.0 / pi) * s1.beta * s1.sigma * std::log(s1.sigma) + s1.mu;
  return s1.sigma * x + s1.mu;
}

std::vector<double> sample_stable(const StableParams& p, std::size_t n, RngStream& rng) {
  p.validate();
  std::vector<double> out(n);
  for (auto& x : out) x = draw_stable(p, rng);
  return out;
}

double draw_positive_stable(double a, RngStream& rng) {
  if (!(a > 0.0 && a <= 1.0)) throw InvalidArgument("positive stable index must lie in (0, 1]");
  if (a == 1.0) return 1.0;
  const double u = pi * rng.uniform();  // (0, pi)
  const double e = rng.exponential();
  const double zolotarev =
      std::sin(a * u) / std::pow(std::sin(u), 1.0 / a) *
      std::pow(std::sin((1.0 - a) * u), (1.0 - a) / a);
  return zolotarev * std::pow(e, -(1.0 - a) / a);
}

double draw_weibull(double shape, RngStream& rng) {
  return std::pow(rng.exponential(), 1.0 / shape);
}

std::vector<double> sample_representation(const StableParams& p, std::size_t n, RngStream& rng) {
  const MixtureCoefficients m = mixture_coefficients(p);
  std::vector<double> out(n);
  if (p.alpha == 2.0) {
    for (auto& y : out) y = p.mu + p.sigma * std::sqrt(2.0) * rng.normal();
    return out;
  }
  const double offset = p.mu - m.lambda;
  for (auto& y : out) {
    const double mix = draw_mixing_weight(p.alpha, rng);
    const double v = draw_standard_stable(p.alpha, 1.0, rng);
    y = m.eta * std::sqrt(2.0 * mix) * rng.normal() + m.theta * v + offset;
  }
  return out;
}

}  // namespace alphastable
