#pragma once

#include <complex>
#include <string>

namespace alphastable {

enum class Parameterization { S0, S1 };

std::string to_string(Parameterization p);

/// Four-parameter stable law. `mu` is the S0 location (mu0) or the S1
/// location (mu1) depending on `parameterization`.
struct StableParams {
  double alpha = 2.0;
  double beta = 0.0;
  double sigma = 1.0;
  double mu = 0.0;
  Parameterization parameterization = Parameterization::S0;

  static StableParams s0(double alpha, double beta, double sigma, double mu0) {
    return {alpha, beta, sigma, mu0, Parameterization::S0};
  }
  static StableParams s1(double alpha, double beta, double sigma, double mu1) {
    return {alpha, beta, sigma, mu1, Parameterization::S1};
  }

  bool valid() const noexcept;
  /// Throws InvalidArgument naming the offending field.
  void validate() const;

  friend bool operator==(const StableParams&, const StableParams&) = default;
};

/// Coefficients of the normal scale-location mixture of an S0 law:
///   Y = eta * sqrt(2P) * N + theta * V + mu0 - lambda
/// with P positive stable of index alpha/2 and V ~ S1(alpha, 1, 1, 0).
/// `delta` is the scale of Y - theta * V' for an independent copy V'.
struct MixtureCoefficients {
  double eta = 0.0;
  double theta = 0.0;
  double lambda = 0.0;
  double delta = 0.0;
};

/// |alpha - 1| below this is treated as alpha == 1 exactly.
inline constexpr double kUnitAlphaTolerance = 1e-8;

bool is_unit_alpha(double alpha) noexcept;

/// Same law under the other location convention. alpha, beta, sigma unchanged.
StableParams convert_parameterization(const StableParams& p, Parameterization target);

std::complex<double> characteristic_function(const StableParams& p, double t);

/// Throws InvalidArgument for S1-tagged input; convert first.
///
/// At alpha == 1 the tangent in lambda is infinite. There lambda is the
/// finite offset -(2/pi) * sigma * beta * log|beta| that keeps
/// mu0 - lambda the location of the representation (zero when beta == 0).
MixtureCoefficients mixture_coefficients(const StableParams& p);

/// lambda / sigma: the location offset per unit scale at fixed (alpha, beta).
double lambda_per_scale(double alpha, double beta);

}  // namespace alphastable
