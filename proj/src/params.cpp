#include "alphastable/params.hpp"

#include <cmath>
#include <numbers>

#include "alphastable/error.hpp"

namespace alphastable {

using std::numbers::pi;

std::string to_string(Parameterization p) { return p == Parameterization::S0 ? "S0" : "S1"; }

bool StableParams::valid() const noexcept {
  return alpha > 0.0 && alpha <= 2.0 && beta >= -1.0 && beta <= 1.0 && sigma > 0.0 &&
         std::isfinite(sigma) && std::isfinite(mu);
}

void StableParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw InvalidArgument("alpha must lie in (0, 2], got " + std::to_string(alpha));
  if (!(beta >= -1.0 && beta <= 1.0))
    throw InvalidArgument("beta must lie in [-1, 1], got " + std::to_string(beta));
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("sigma must be positive and finite, got " + std::to_string(sigma));
  if (!std::isfinite(mu)) throw InvalidArgument("mu must be finite");
}

bool is_unit_alpha(double alpha) noexcept { return std::abs(alpha - 1.0) < kUnitAlphaTolerance; }

namespace {

// mu0 - mu1 for the given (alpha, beta, sigma).
double location_gap(double alpha, double beta, double sigma) {
  if (beta == 0.0) return 0.0;
  if (is_unit_alpha(alpha)) return beta * (2.0 / pi) * sigma * std::log(sigma);
  return beta * sigma * std::tan(pi * alpha / 2.0);
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

StableParams convert_parameterization(const StableParams& p, Parameterization target) {
  if (p.parameterization == target) return p;
  StableParams out = p;
  out.parameterization = target;
  const double gap = location_gap(p.alpha, p.beta, p.sigma);
  out.mu = target == Parameterization::S1 ? p.mu - gap : p.mu + gap;
  return out;
}

std::complex<double> characteristic_function(const StableParams& p, double t) {
  if (t == 0.0) return {1.0, 0.0};
  const StableParams s1 = convert_parameterization(p, Parameterization::S1);
  const double st = std::abs(s1.sigma * t);
  std::complex<double> exponent;
  if (is_unit_alpha(s1.alpha)) {
    exponent = {-st, -st * s1.beta * sign(t) * (2.0 / pi) * std::log(std::abs(t))};
  } else {
    const double sa = std::pow(st, s1.alpha);
    exponent = {-sa, sa * s1.beta * sign(t) * std::tan(pi * s1.alpha / 2.0)};
  }
  exponent += std::complex<double>(0.0, t * s1.mu);
  return std::exp(exponent);
}

double lambda_per_scale(double alpha, double beta) {
  if (beta == 0.0) return 0.0;
  if (is_unit_alpha(alpha)) return -(2.0 / pi) * beta * std::log(std::abs(beta));
  return beta * std::tan(pi * alpha / 2.0);
}

MixtureCoefficients mixture_coefficients(const StableParams& p) {
  if (p.parameterization != Parameterization::S0)
    throw InvalidArgument("mixture_coefficients expects S0 parameters");
  p.validate();
  const double ab = std::abs(p.beta);
  MixtureCoefficients m;
  m.eta = p.sigma * std::pow(1.0 - ab, 1.0 / p.alpha);
  m.theta = p.sigma * sign(p.beta) * std::pow(ab, 1.0 / p.alpha);
  m.lambda = p.sigma * lambda_per_scale(p.alpha, p.beta);
  m.delta = p.sigma * std::pow(1.0 + ab, 1.0 / p.alpha);
  return m;
}

}  // namespace alphastable
