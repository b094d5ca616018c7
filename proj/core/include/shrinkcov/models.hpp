#pragma once

#include <cstdint>

#include "shrinkcov/estimators.hpp"
#include "shrinkcov/rng.hpp"

namespace shrinkcov {

/// Sigma_ij = r^|i-j|, |r| < 1.
Matrix ar1_cov(Index p, double r);

/// Covariance of unit-step fractional Brownian motion increments,
/// Sigma_ij = ((d+1)^2H - 2 d^2H + |d-1|^2H) / 2 with d = |i-j|, H in [0.5, 1].
/// The diagonal is exactly 1.
Matrix fbm_cov(Index p, double hurst);

enum class ModelKind { AR1, FBMIncrement, Explicit };

/// A true-covariance family together with its parameter.
class CovModel {
 public:
  static CovModel ar1(Index p, double r);
  static CovModel fbm(Index p, double hurst);
  static CovModel explicit_matrix(Matrix sigma);

  ModelKind kind() const noexcept { return kind_; }
  Index dim() const noexcept { return sigma_.rows(); }
  /// r for AR1, H for FBM, NaN for Explicit.
  double parameter() const noexcept { return parameter_; }
  const Matrix& covariance() const noexcept { return sigma_; }

 private:
  CovModel(ModelKind kind, double parameter, Matrix sigma)
      : kind_(kind), parameter_(parameter), sigma_(std::move(sigma)) {}

  ModelKind kind_;
  double parameter_;
  Matrix sigma_;
};

/// Returns L with L L^T = sigma. Tries Cholesky first, then a clamped
/// symmetric eigendecomposition for semidefinite inputs. Eigenvalues below
/// -1e-10 * lambda_max are rejected as non-PSD.
struct PsdFactor {
  Matrix factor;
  bool lower_triangular = false;
};
PsdFactor factorize_psd(const Matrix& sigma);

/// Zero-mean Gaussian sampler with covariance sigma. Immutable; every call
/// to sample() seeds its own stream from (seed, stream), so concurrent
/// callers never share generator state.
class GaussianSampler {
 public:
  GaussianSampler(Matrix sigma, std::uint64_t seed);

  const Matrix& sigma() const noexcept { return sigma_; }
  const Matrix& factor() const noexcept { return factor_.factor; }
  std::uint64_t seed() const noexcept { return seed_; }
  Index dim() const noexcept { return sigma_.rows(); }

  SampleSet sample(Index n, std::uint64_t stream = 0) const;

  /// Draws n columns from an externally owned stream.
  Matrix draw(Index n, NormalStream& rng) const;

 private:
  Matrix sigma_;
  PsdFactor factor_;
  std::uint64_t seed_;
};

/// Fills a rows x cols matrix column by column with standard normals.
Matrix standard_normal_matrix(Index rows, Index cols, NormalStream& rng);

}  // namespace shrinkcov
