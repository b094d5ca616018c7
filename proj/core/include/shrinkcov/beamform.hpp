#pragma once

#include <string_view>
#include <vector>

#include "shrinkcov/complexcov.hpp"
#include "shrinkcov/rng.hpp"

namespace shrinkcov {

/// Plane-wave source seen by the array.
struct Source {
  double omega = 0.0;  // spatial frequency, radians
  double power = 1.0;  // linear variance
};

/// Uniform linear array with independent circular Gaussian sources and
/// white sensor noise.
struct UlaScenario {
  Index p = 10;
  std::vector<Source> sources;
  double noise_power = 1.0;
  std::size_t signal_index = 0;

  /// Throws InvalidParameter on non-positive powers or a bad signal index.
  void validate() const;
  const Source& signal() const { return sources.at(signal_index); }

  /// Ten sensors at half-wavelength spacing. Signal of interest at 20 deg,
  /// 10 dB over the noise; interferers at -30 deg and at spatial frequency
  /// pi sin(20 deg) + 2 pi gamma / p with gamma = 0.9, each 15 dB over the
  /// noise.
  static UlaScenario reference(Index p = 10, double signal_db = 10.0,
                               double interference_db = 15.0,
                               double theta_s_deg = 20.0,
                               double theta_i1_deg = -30.0,
                               double gamma = 0.9);
};

/// omega = pi sin(theta) for half-wavelength spacing.
double spatial_frequency(double theta_rad);
double db_to_linear(double db);
double linear_to_db(double value);

/// a_k = exp(-j k omega), k = 0..p-1.
CVector array_response(Index p, double omega);

/// sum_k power_k a_k a_k^H + noise I.
/// Does not need a signal of interest; an empty source list gives noise I.
CMatrix true_cov(const UlaScenario& scenario);

/// true_cov minus the signal-of-interest term.
CMatrix interference_plus_noise_cov(const UlaScenario& scenario);

struct BeamWeights {
  CVector w;
  Complex constraint_gain;  // w^H a_s
};

/// Minimum-variance distortionless response weights
/// w = Sigma^-1 a / (a^H Sigma^-1 a), via a Hermitian factorization.
/// `origin` names the estimator in the singular-matrix error.
BeamWeights capon_weights(const CMatrix& sigma, const CVector& a_s,
                          std::string_view origin = "covariance");

/// Output SINR (linear) of w against the scenario's true covariance.
double sinr(const BeamWeights& weights, const UlaScenario& scenario);

/// n snapshots x(t) = sum_k a_k s_k(t) + noise(t).
ComplexSampleSet draw_snapshots(const UlaScenario& scenario, Index n,
                                NormalStream& rng);

}  // namespace shrinkcov
