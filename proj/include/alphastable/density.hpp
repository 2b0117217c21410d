#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "alphastable/params.hpp"
#include "alphastable/rng.hpp"

namespace alphastable {

/// Density estimates below this are clamped before taking logs.
inline constexpr double kDensityFloor = 1e-300;

/// K*K latent pairs (p, v) drawn from the mixing laws at a fixed alpha:
/// p from the positive stable weight of index alpha/2, v from S1(alpha,1,1,0).
///
/// The pairs depend on alpha only, so one set serves every (beta, sigma, mu0)
/// evaluated at that alpha (common random numbers).
struct LatentDraws {
  double alpha = 2.0;
  std::vector<double> p;
  std::vector<double> v;

  static LatentDraws draw(double alpha, std::size_t grid_size, RngStream& rng);

  std::size_t size() const noexcept { return p.size(); }
};

/// Gaussian components N(mu0 - lambda + theta v, 2 p eta^2) of the
/// conditional hierarchy, precomputed for repeated evaluation.
class MixtureKernel {
 public:
  MixtureKernel(const StableParams& s0, const LatentDraws& draws);

  /// (1 / K^2) * sum of component densities at y; not floored.
  double density(double y) const;

  /// log of each component density at y (into `out`, resized as needed).
  void log_components(double y, std::vector<double>& out) const;

  std::size_t size() const noexcept { return mean_.size(); }
  bool degenerate() const noexcept { return degenerate_; }

 private:
  std::vector<double> mean_;
  std::vector<double> inv_two_var_;
  std::vector<double> norm_;
  std::vector<double> log_norm_;
  bool degenerate_ = false;
};

/// Monte Carlo S0 density at each y, one latent draw set shared by all
/// points of the batch. Non-negative and not floored.
std::vector<double> pdf_mc(std::span<const double> ys, const StableParams& p, std::size_t grid_size,
                           RngStream& rng);

double pdf_mc(double y, const StableParams& p, std::size_t grid_size, RngStream& rng);

/// Sum of log densities with the kDensityFloor clamp.
double observed_loglik(std::span<const double> data, const StableParams& p, std::size_t grid_size,
                       RngStream& rng);

/// As above with caller-provided draws (draws.alpha must equal p.alpha).
double observed_loglik(std::span<const double> data, const StableParams& p,
                       const LatentDraws& draws);

}  // namespace alphastable
