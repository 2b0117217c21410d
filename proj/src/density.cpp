#include "alphastable/density.hpp"

#include <cmath>
#include <numbers>

#include "alphastable/error.hpp"
#include "alphastable/sampling.hpp"

namespace alphastable {

LatentDraws LatentDraws::draw(double alpha, std::size_t grid_size, RngStream& rng) {
  if (grid_size == 0) throw InvalidArgument("Monte Carlo grid size must be at least 1");
  LatentDraws d;
  d.alpha = alpha;
  const std::size_t count = grid_size * grid_size;
  d.p.resize(count);
  d.v.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    d.p[k] = draw_mixing_weight(alpha, rng);
    d.v[k] = draw_standard_stable(alpha, 1.0, rng);
  }
  return d;
}

MixtureKernel::MixtureKernel(const StableParams& s0, const LatentDraws& draws) {
  const MixtureCoefficients m = mixture_coefficients(s0);
  const std::size_t count = draws.size();
  mean_.resize(count);
  inv_two_var_.resize(count);
  norm_.resize(count);
  log_norm_.resize(count);
  degenerate_ = !(m.eta > 0.0);
  const double offset = s0.mu - m.lambda;
  const double eta2 = m.eta * m.eta;
  for (std::size_t k = 0; k < count; ++k) {
    mean_[k] = offset + m.theta * draws.v[k];
    const double var = 2.0 * draws.p[k] * eta2;
    inv_two_var_[k] = 0.5 / var;
    log_norm_[k] = -0.5 * std::log(2.0 * std::numbers::pi * var);
    norm_[k] = std::exp(log_norm_[k]);
  }
}

double MixtureKernel::density(double y) const {
  if (degenerate_ || mean_.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < mean_.size(); ++k) {
    const double r = y - mean_[k];
    sum += norm_[k] * std::exp(-r * r * inv_two_var_[k]);
  }
  return sum / static_cast<double>(mean_.size());
}

void MixtureKernel::log_components(double y, std::vector<double>& out) const {
  out.resize(mean_.size());
  for (std::size_t k = 0; k < mean_.size(); ++k) {
    const double r = y - mean_[k];
    out[k] = log_norm_[k] - r * r * inv_two_var_[k];
  }
}

std::vector<double> pdf_mc(std::span<const double> ys, const StableParams& p, std::size_t grid_size,
                           RngStream& rng) {
  const StableParams s0 = convert_parameterization(p, Parameterization::S0);
  s0.validate();
  const LatentDraws draws = LatentDraws::draw(s0.alpha, grid_size, rng);
  const MixtureKernel kernel(s0, draws);
  std::vector<double> out(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) out[i] = kernel.density(ys[i]);
  return out;
}

double pdf_mc(double y, const StableParams& p, std::size_t grid_size, RngStream& rng) {
  return pdf_mc(std::span<const double>(&y, 1), p, grid_size, rng).front();
}

double observed_loglik(std::span<const double> data, const StableParams& p,
                       const LatentDraws& draws) {
  if (data.empty()) throw InvalidArgument("observed_loglik needs at least one observation");
  const StableParams s0 = convert_parameterization(p, Parameterization::S0);
  if (draws.alpha != s0.alpha) throw InvalidArgument("latent draws were made at a different alpha");
  const MixtureKernel kernel(s0, draws);
  double total = 0.0;
  for (double y : data) total += std::log(std::max(kernel.density(y), kDensityFloor));
  return total;
}

double observed_loglik(std::span<const double> data, const StableParams& p, std::size_t grid_size,
                       RngStream& rng) {
  const StableParams s0 = convert_parameterization(p, Parameterization::S0);
  s0.validate();
  const LatentDraws draws = LatentDraws::draw(s0.alpha, grid_size, rng);
  return observed_loglik(data, s0, draws);
}

}  // namespace alphastable
