#include "alphastable/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "alphastable/baseline.hpp"
#include "alphastable/log.hpp"
#include "alphastable/sampling.hpp"

namespace alphastable::em {

using std::numbers::pi;

void EMConfig::validate() const {
  if (K < 1) throw InvalidArgument("K must be at least 1");
  if (profile_K < 1) throw InvalidArgument("profile_K must be at least 1");
  if (!(N0 < N)) throw InvalidArgument("EM burn-in N0 must be smaller than N");
  if (!(M0 < M)) throw InvalidArgument("SEM burn-in M0 must be smaller than M");
  if (beta_grid < 3 || beta_final_grid < 3) throw InvalidArgument("beta grids need at least 3 points");
  if (!(alpha_min > 0.0 && alpha_min < 2.0)) throw InvalidArgument("alpha_min must lie in (0, 2)");
  if (cdf_sample_size < 1) throw InvalidArgument("cdf_sample_size must be positive");
}

FitAborted::FitAborted(std::size_t iteration, EMTrace trace_so_far, const std::string& what)
    : Error("EM aborted at iteration " + std::to_string(iteration) + ": " + what),
      iteration_(iteration),
      trace_(std::move(trace_so_far)) {}

namespace {

void require_s0(const StableParams& p) {
  if (p.parameterization != Parameterization::S0)
    throw InvalidArgument("EM routines expect S0 parameters");
  p.validate();
}

void require_aligned(std::span<const double> data, std::span<const ExpectationTriple> triples) {
  if (data.size() != triples.size()) throw InvalidArgument("triples must align with data");
  if (data.empty()) throw InvalidArgument("no observations");
}

}  // namespace

// ---------------------------------------------------------------- E-step

std::vector<ExpectationTriple> e_step_expectations(std::span<const double> data,
                                                   const StableParams& theta,
                                                   const LatentDraws& draws) {
  require_s0(theta);
  if (draws.alpha != theta.alpha) throw InvalidArgument("latent draws were made at a different alpha");
  const MixtureKernel kernel(theta, draws);
  std::vector<ExpectationTriple> out(data.size());
  std::vector<double> logw;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (kernel.degenerate()) throw DegenerateWeights(i);
    kernel.log_components(data[i], logw);
    const double top = *std::ranges::max_element(logw);
    if (!std::isfinite(top)) throw DegenerateWeights(i);
    double s = 0.0, s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t k = 0; k < logw.size(); ++k) {
      const double w = std::exp(logw[k] - top);
      const double wp = w / draws.p[k];
      s += w;
      s0 += wp;
      s1 += wp * draws.v[k];
      s2 += wp * draws.v[k] * draws.v[k];
    }
    out[i] = {s0 / s, s1 / s, s2 / s};
    if (!(out[i].e0 > 0.0) || !std::isfinite(out[i].e2)) throw DegenerateWeights(i);
  }
  return out;
}

std::vector<ExpectationTriple> e_step_expectations(std::span<const double> data,
                                                   const StableParams& theta, std::size_t K,
                                                   RngStream& rng) {
  require_s0(theta);
  const LatentDraws draws = LatentDraws::draw(theta.alpha, K, rng);
  return e_step_expectations(data, theta, draws);
}

// ---------------------------------------------------------------- M-step

double update_mu0(std::span<const double> data, std::span<const ExpectationTriple> triples,
                  const StableParams& theta) {
  require_aligned(data, triples);
  const MixtureCoefficients m = mixture_coefficients(theta);
  double num = 0.0, sum_e0 = 0.0, sum_e1 = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    num += (data[i] + m.lambda) * triples[i].e0;
    sum_e0 += triples[i].e0;
    sum_e1 += triples[i].e1;
  }
  return (num - m.theta * sum_e1) / sum_e0;
}

// The complete-data objective depends on sigma through eta, theta and
// lambda, all proportional to sigma at fixed (alpha, beta). Its stationarity
// condition multiplied by sigma^3 is the quadratic below, with residuals
// d_i = y_i - mu0_new.
ScaleQuadratic scale_quadratic(std::span<const double> data,
                               std::span<const ExpectationTriple> triples,
                               const StableParams& theta, double mu0_new) {
  require_aligned(data, triples);
  require_s0(theta);
  const double ab = std::abs(theta.beta);
  const double eta_unit_sq = std::pow(1.0 - ab, 2.0 / theta.alpha);
  const double theta_unit = (theta.beta > 0 ? 1.0 : theta.beta < 0 ? -1.0 : 0.0) *
                            std::pow(ab, 1.0 / theta.alpha);
  const double lambda_unit = lambda_per_scale(theta.alpha, theta.beta);
  double sd0 = 0.0, sd1 = 0.0, sdd0 = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double d = data[i] - mu0_new;
    sd0 += d * triples[i].e0;
    sd1 += d * triples[i].e1;
    sdd0 += d * d * triples[i].e0;
  }
  ScaleQuadratic q;
  q.a = -static_cast<double>(data.size());
  q.b = (lambda_unit * sd0 - theta_unit * sd1) / (2.0 * eta_unit_sq);
  q.c = sdd0 / (2.0 * eta_unit_sq);
  return q;
}

double update_sigma(std::span<const double> data, std::span<const ExpectationTriple> triples,
                    const StableParams& theta, double mu0_new) {
  const ScaleQuadratic q = scale_quadratic(data, triples, theta, mu0_new);
  if (!(q.c > 0.0)) {
    log::warn("all residuals vanish in the scale update; returning the scale floor");
    return kSigmaFloor;
  }
  const double n = -q.a;
  // Upper root of -n s^2 + b s + c; written to avoid cancellation when b < 0.
  const double disc = std::sqrt(q.b * q.b + 4.0 * n * q.c);
  const double root = q.b >= 0.0 ? (q.b + disc) / (2.0 * n) : 2.0 * q.c / (disc - q.b);
  return std::max(root, kSigmaFloor);
}

namespace {

// Symmetric uniform grid of `count` points over [centre - half, centre + half]
// clipped to [-1, 1]; exact negation of centre gives the negated grid.
std::vector<double> symmetric_grid(double centre, double half, std::size_t count) {
  std::vector<double> g(count);
  const double denom = static_cast<double>(count - 1);
  for (std::size_t j = 0; j < count; ++j) {
    const double s = (2.0 * static_cast<double>(j) - denom) / denom;
    g[j] = std::clamp(centre + half * s, -1.0, 1.0);
  }
  return g;
}

}  // namespace

double update_beta_profile(std::span<const double> data, double alpha, double sigma, double mu0,
                           std::size_t K, std::size_t grid, RngStream& rng) {
  if (grid < 3) throw InvalidArgument("beta grid needs at least 3 points");
  if (data.empty()) throw InvalidArgument("no observations");
  StableParams::s0(alpha, 0.0, sigma, mu0).validate();
  const LatentDraws draws = LatentDraws::draw(alpha, K, rng);

  double best_beta = 0.0;
  double best_ll = -std::numeric_limits<double>::infinity();
  auto scan = [&](const std::vector<double>& candidates) {
    for (double b : candidates) {
      const double ll = observed_loglik(data, StableParams::s0(alpha, b, sigma, mu0), draws);
      if (ll > best_ll) {
        best_ll = ll;
        best_beta = b;
      }
    }
  };
  const double step = 2.0 / static_cast<double>(grid - 1);
  scan(symmetric_grid(0.0, 1.0, grid));
  scan(symmetric_grid(best_beta, step, grid));
  return best_beta;
}

// ---------------------------------------------------------------- CM-step

std::vector<double> transform_cm(std::span<const double> data, const StableParams& theta,
                                 RngStream& rng) {
  require_s0(theta);
  const MixtureCoefficients m = mixture_coefficients(theta);
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = draw_standard_stable(theta.alpha, 1.0, rng);
    const double e = rng.exponential();
    const double y_star = (data[i] - m.theta * v - theta.mu + m.lambda) / m.delta;
    out[i] = y_star / std::sqrt(2.0 * e);
  }
  return out;
}

double sample_w_posterior(double y_ss, double alpha, RngStream& rng) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidArgument("alpha must lie in (0, 2]");
  if (!std::isfinite(y_ss)) throw InvalidArgument("y** must be finite");
  static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);
  // Weibull(alpha, 1) tail beyond w_max carries mass 1e-12.
  const double w_max = std::pow(-std::log(1e-12), 1.0 / alpha);
  const double ay = std::abs(y_ss);
  // sup over w of w exp(-y^2 w^2 / 2) / sqrt(2 pi) sits at w = 1/|y|. When
  // that point lies past w_max (including y** = 0) the envelope is taken
  // over [0, w_max] and proposals beyond it are rejected.
  const bool truncated = ay * w_max < 1.0;

  // Weibull proposals accept at rate about 1/w_max (truncated) or
  // |y|^-alpha (untruncated). Past kMaxEnvelopeRatio the sampler switches to
  // proposals matched to the dominant factor of the same target
  // w^alpha exp(-w^alpha - y^2 w^2 / 2).
  constexpr double kMaxEnvelopeRatio = 1e3;
  if (truncated && w_max > kMaxEnvelopeRatio) {
    // size-biased Weibull: w^alpha ~ Gamma(1 + 1/alpha); accept exp(-y^2 w^2 / 2)
    std::gamma_distribution<double> gamma(1.0 + 1.0 / alpha, 1.0);
    for (;;) {
      const double w = std::pow(gamma(rng.engine()), 1.0 / alpha);
      if (rng.uniform() < std::exp(-0.5 * ay * ay * w * w) && w > 0.0) return w;
    }
  }
  if (!truncated && std::pow(ay, alpha) > kMaxEnvelopeRatio) {
    // (|y| w)^2 / 2 ~ Gamma((alpha + 1) / 2); accept exp(-w^alpha)
    std::gamma_distribution<double> gamma(0.5 * (alpha + 1.0), 1.0);
    for (;;) {
      const double w = std::sqrt(2.0 * gamma(rng.engine())) / ay;
      if (rng.uniform() < std::exp(-std::pow(w, alpha)) && w > 0.0) return w;
    }
  }

  const double bound = truncated ? w_max * inv_sqrt_2pi * std::exp(-0.5 * ay * ay * w_max * w_max)
                                 : std::exp(-0.5) * inv_sqrt_2pi / ay;
  for (std::size_t attempt = 0; attempt < 100'000'000; ++attempt) {
    const double w = draw_weibull(alpha, rng);
    const double u = rng.uniform() * bound;
    if (truncated && w > w_max) continue;
    if (u < w * inv_sqrt_2pi * std::exp(-0.5 * ay * ay * w * w)) return w;
  }
  throw Error("posterior sampler for W failed to accept a proposal");
}

ShapeEstimate maximize_lw(std::span<const double> w, double alpha_min) {
  if (w.empty()) throw InvalidArgument("maximize_lw needs at least one value");
  std::vector<double> logw(w.size());
  double sum_log = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i])) throw InvalidArgument("Weibull values must be positive");
    logw[i] = std::log(w[i]);
    sum_log += logw[i];
  }
  const double n = static_cast<double>(w.size());
  auto score = [&](double a) {
    double s = 0.0;
    for (double lw : logw) s += std::exp(a * lw) * lw;
    return n / a + sum_log - s;
  };
  const double hi = 2.0;
  if (score(hi) >= 0.0) return {hi, true};
  if (score(alpha_min) <= 0.0) return {alpha_min, true};
  boost::uintmax_t max_iter = 200;
  const auto [lo_root, hi_root] = boost::math::tools::toms748_solve(
      score, alpha_min, hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
  return {0.5 * (lo_root + hi_root), false};
}

std::vector<double> cm_step_cycles(std::span<const double> data, const StableParams& theta,
                                   const EMConfig& cfg, RngStream& rng) {
  require_s0(theta);
  cfg.validate();
  std::vector<double> cycles;
  cycles.reserve(cfg.M);
  std::vector<double> w(data.size());
  double current = theta.alpha;
  for (std::size_t j = 0; j < cfg.M; ++j) {
    const std::vector<double> yss = transform_cm(data, theta, rng);
    for (std::size_t i = 0; i < yss.size(); ++i) w[i] = sample_w_posterior(yss[i], current, rng);
    current = maximize_lw(w, cfg.alpha_min).alpha;
    cycles.push_back(current);
  }
  return cycles;
}

double cm_step_alpha(std::span<const double> data, const StableParams& theta,
                     const EMConfig& cfg, RngStream& rng) {
  const std::vector<double> cycles = cm_step_cycles(data, theta, cfg, rng);
  const auto first = cycles.begin() + static_cast<std::ptrdiff_t>(cfg.M0);
  const double mean =
      std::accumulate(first, cycles.end(), 0.0) / static_cast<double>(cfg.M - cfg.M0);
  return std::clamp(mean, cfg.alpha_min, 2.0);
}

// ---------------------------------------------------------------- driver

namespace {

enum Phase : std::uint64_t { kEStep = 0, kProfile = 1, kCmStep = 2, kFinalProfile = 3, kLoglik = 4, kKs = 5 };

constexpr int kEStepRetries = 3;
constexpr double kMaxStartSkew = 0.95;

std::vector<ExpectationTriple> robust_e_step(std::span<const double> data, const StableParams& theta,
                                             std::size_t K, const RngStream& base) {
  for (int attempt = 0;; ++attempt) {
    RngStream rng = base.substream(static_cast<std::uint64_t>(attempt));
    try {
      return e_step_expectations(data, theta, K, rng);
    } catch (const DegenerateWeights&) {
      if (attempt + 1 >= kEStepRetries) throw;
    }
  }
}

}  // namespace

FitResult fit_em(std::span<const double> data, const StableParams& init, const EMConfig& cfg,
                 const IterationObserver& observer) {
  if (data.empty()) throw InvalidArgument("fit_em needs at least one observation");
  cfg.validate();
  StableParams current = convert_parameterization(init, Parameterization::S0);
  current.validate();
  current.alpha = std::clamp(current.alpha, cfg.alpha_min, 2.0);
  // |beta| = 1 has eta = 0: the E-step weights are all degenerate there.
  current.beta = std::clamp(current.beta, -kMaxStartSkew, kMaxStartSkew);

  const RngStream root(cfg.seed, 0);
  FitResult result;
  result.config = cfg;
  result.trace.reserve(cfg.N + 1);
  result.trace.push_back(current);

  for (std::size_t t = 1; t <= cfg.N; ++t) {
    const RngStream iteration = root.substream(t);
    StableParams next = current;
    try {
      const auto triples = robust_e_step(data, current, cfg.K, iteration.substream(kEStep));
      next.mu = update_mu0(data, triples, current);
      if (!std::isfinite(next.mu)) throw FitAborted(t, result.trace, "non-finite location update");
      next.sigma = update_sigma(data, triples, current, next.mu);
      if (!std::isfinite(next.sigma)) throw FitAborted(t, result.trace, "non-finite scale update");

      RngStream profile_rng = iteration.substream(kProfile);
      next.beta = update_beta_profile(data, current.alpha, next.sigma, next.mu, cfg.profile_K,
                                      cfg.beta_grid, profile_rng);

      RngStream cm_rng = iteration.substream(kCmStep);
      const StableParams staged = StableParams::s0(current.alpha, next.beta, next.sigma, next.mu);
      next.alpha = cm_step_alpha(data, staged, cfg, cm_rng);
    } catch (const DegenerateWeights& e) {
      throw FitAborted(t, result.trace, e.what());
    } catch (const InvalidArgument& e) {
      throw FitAborted(t, result.trace, e.what());
    }
    if (!next.valid()) throw FitAborted(t, result.trace, "update left the parameter space");
    result.trace.push_back(next);
    current = next;
    if (observer) observer(t, current);
  }

  double alpha = 0.0, sigma = 0.0, mu0 = 0.0;
  for (std::size_t t = cfg.N0 + 1; t <= cfg.N; ++t) {
    alpha += result.trace[t].alpha;
    sigma += result.trace[t].sigma;
    mu0 += result.trace[t].mu;
  }
  const double window = static_cast<double>(cfg.N - cfg.N0);
  alpha /= window;
  sigma /= window;
  mu0 /= window;

  const RngStream finish = root.substream(cfg.N + 1);
  RngStream profile_rng = finish.substream(kFinalProfile);
  const double beta =
      update_beta_profile(data, alpha, sigma, mu0, cfg.K, cfg.beta_final_grid, profile_rng);
  result.params = StableParams::s0(alpha, beta, sigma, mu0);

  RngStream ll_rng = finish.substream(kLoglik);
  result.loglik = observed_loglik(data, result.params, cfg.K, ll_rng);
  RngStream ks_rng = finish.substream(kKs);
  result.ks = ks_statistic(data, result.params, cfg.cdf_sample_size, ks_rng);
  return result;
}

FitResult fit_em(std::span<const double> data, const EMConfig& cfg,
                 const IterationObserver& observer) {
  return fit_em(data, baseline::cf_estimate(data), cfg, observer);
}

}  // namespace alphastable::em
