#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <span>
#include <vector>

#include "alphastable/density.hpp"
#include "alphastable/error.hpp"
#include "alphastable/goodness_of_fit.hpp"
#include "alphastable/params.hpp"
#include "alphastable/rng.hpp"

namespace alphastable::em {

/// Tuning knobs of the estimator. Defaults are the simulation-study settings.
struct EMConfig {
  std::size_t K = 100;   ///< E-step Monte Carlo grid: K*K latent pairs.
  std::size_t N = 140;   ///< EM iterations.
  std::size_t N0 = 100;  ///< EM burn-in discarded before averaging.
  std::size_t M = 40;    ///< SEM cycles per CM-step.
  std::size_t M0 = 20;   ///< SEM burn-in.
  std::size_t beta_grid = 21;        ///< In-loop profile grid over [-1, 1].
  std::size_t beta_final_grid = 41;  ///< Final profile grid.
  std::size_t profile_K = 32;        ///< Grid size of the in-loop profile density.
  double alpha_min = 0.1;            ///< Lower end of the alpha search interval (exclusive).
  std::size_t cdf_sample_size = kDefaultCdfSampleSize;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Posterior moments E(P^-1 V^r | y) for r = 0, 1, 2.
struct ExpectationTriple {
  double e0 = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
};

using EMTrace = std::vector<StableParams>;

struct FitResult {
  StableParams params;
  EMTrace trace;  ///< trace[0] is the start, trace[t] the t-th iterate.
  double loglik = 0.0;
  double ks = 0.0;
  EMConfig config;
};

/// Thrown when an iteration produces a non-finite or invalid update.
class FitAborted : public Error {
 public:
  FitAborted(std::size_t iteration, EMTrace trace_so_far, const std::string& what);

  std::size_t iteration() const noexcept { return iteration_; }
  const EMTrace& trace() const noexcept { return trace_; }

 private:
  std::size_t iteration_;
  EMTrace trace_;
};

// ---------------------------------------------------------------- E-step

/// Self-normalised Monte Carlo estimates of E(P^-1 V^r | y_i) under theta,
/// using K*K prior draws shared by every observation.
/// Throws DegenerateWeights when an observation gets no usable weight.
std::vector<ExpectationTriple> e_step_expectations(std::span<const double> data,
                                                   const StableParams& theta, std::size_t K,
                                                   RngStream& rng);

std::vector<ExpectationTriple> e_step_expectations(std::span<const double> data,
                                                   const StableParams& theta,
                                                   const LatentDraws& draws);

// ---------------------------------------------------------------- M-step

/// Maximiser of the expected complete-data log-likelihood in mu0:
///   [sum (y_i + lambda) E0_i - theta sum E1_i] / sum E0_i.
double update_mu0(std::span<const double> data, std::span<const ExpectationTriple> triples,
                  const StableParams& theta);

/// Coefficients of G(sigma) = a sigma^2 + b sigma + c, whose positive root
/// maximises the expected complete-data log-likelihood in sigma.
struct ScaleQuadratic {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double operator()(double sigma) const { return (a * sigma + b) * sigma + c; }
};

ScaleQuadratic scale_quadratic(std::span<const double> data,
                               std::span<const ExpectationTriple> triples,
                               const StableParams& theta, double mu0_new);

/// Smallest scale returned when every residual vanishes.
inline constexpr double kSigmaFloor = 1e-12;

double update_sigma(std::span<const double> data, std::span<const ExpectationTriple> triples,
                    const StableParams& theta, double mu0_new);

/// Profile maximisation of the Monte Carlo log-likelihood over beta on a
/// uniform grid of [-1, 1], refined once around the best point. All
/// candidates share one latent draw set.
double update_beta_profile(std::span<const double> data, double alpha, double sigma, double mu0,
                           std::size_t K, std::size_t grid, RngStream& rng);

// ---------------------------------------------------------------- CM-step

/// y** = (y - theta v - mu0 + lambda) / (delta sqrt(2 e)) with fresh
/// v ~ S1(alpha, 1, 1, 0) and e ~ Exp(1) per observation.
std::vector<double> transform_cm(std::span<const double> data, const StableParams& theta,
                                 RngStream& rng);

/// One draw from W | y** with W ~ Weibull(alpha, 1) and y** | W ~ N(0, W^-2),
/// by rejection from the Weibull prior.
double sample_w_posterior(double y_ss, double alpha, RngStream& rng);

struct ShapeEstimate {
  double alpha = 0.0;
  bool clamped = false;  ///< No interior stationary point; boundary returned.
};

/// Maximises n log a - sum w^a + a sum log w over a in (alpha_min, 2].
ShapeEstimate maximize_lw(std::span<const double> w, double alpha_min = 0.1);

/// Per-cycle alpha values of one CM-step (length M).
std::vector<double> cm_step_cycles(std::span<const double> data, const StableParams& theta,
                                   const EMConfig& cfg, RngStream& rng);

/// Mean of the post-burn-in SEM cycles, clamped to (alpha_min, 2].
double cm_step_alpha(std::span<const double> data, const StableParams& theta,
                     const EMConfig& cfg, RngStream& rng);

// ---------------------------------------------------------------- driver

/// Called after every iteration with (t, iterate t).
using IterationObserver = std::function<void(std::size_t, const StableParams&)>;

/// Iterates E-step, mu0 and sigma updates, beta profile step and CM-step N
/// times; the result averages alpha, sigma, mu0 over iterations (N0, N] and
/// takes beta from a final profile pass at those averages.
/// Throws FitAborted carrying the trace so far on a non-finite update.
FitResult fit_em(std::span<const double> data, const StableParams& init, const EMConfig& cfg,
                 const IterationObserver& observer = {});

/// Starts from the characteristic-function estimate.
FitResult fit_em(std::span<const double> data, const EMConfig& cfg,
                 const IterationObserver& observer = {});

}  // namespace alphastable::em
