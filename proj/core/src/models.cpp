#include "shrinkcov/models.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "shrinkcov/error.hpp"

namespace shrinkcov {

namespace {

void require_dim(Index p) {
  if (p < 1) {
    throw Error(ErrorKind::InvalidParameter,
                "covariance dimension must be >= 1, got " + std::to_string(p));
  }
}

template <typename Fn>
Matrix toeplitz(Index p, Fn&& lag_value) {
  Vector lags(p);
  for (Index d = 0; d < p; ++d) lags(d) = lag_value(d);
  Matrix sigma(p, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) sigma(i, j) = lags(std::abs(i - j));
  }
  return sigma;
}

}  // namespace

Matrix ar1_cov(Index p, double r) {
  require_dim(p);
  if (!(std::abs(r) < 1.0)) {
    throw Error(ErrorKind::InvalidParameter,
                "AR(1) coefficient must satisfy |r| < 1");
  }
  return toeplitz(p, [r](Index d) {
    return std::pow(r, static_cast<double>(d));
  });
}

Matrix fbm_cov(Index p, double hurst) {
  require_dim(p);
  if (!(hurst >= 0.5 && hurst <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "Hurst exponent must be in [0.5, 1]");
  }
  const double e = 2.0 * hurst;
  return toeplitz(p, [e](Index lag) {
    if (lag == 0) return 1.0;
    const double d = static_cast<double>(lag);
    return 0.5 * (std::pow(d + 1.0, e) - 2.0 * std::pow(d, e) +
                  std::pow(d - 1.0, e));
  });
}

CovModel CovModel::ar1(Index p, double r) {
  return CovModel(ModelKind::AR1, r, ar1_cov(p, r));
}

CovModel CovModel::fbm(Index p, double hurst) {
  return CovModel(ModelKind::FBMIncrement, hurst, fbm_cov(p, hurst));
}

CovModel CovModel::explicit_matrix(Matrix sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 1) {
    throw Error(ErrorKind::InvalidInput, "explicit covariance must be square");
  }
  if (!sigma.allFinite()) {
    throw Error(ErrorKind::InvalidInput, "explicit covariance has non-finite entries");
  }
  return CovModel(ModelKind::Explicit, std::numeric_limits<double>::quiet_NaN(),
                  std::move(sigma));
}

PsdFactor factorize_psd(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols()) {
    throw Error(ErrorKind::InvalidInput, "covariance must be square");
  }
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() == Eigen::Success) {
    Matrix lower = llt.matrixL();
    const double err = (lower * lower.transpose() - sigma).norm();
    if (err <= 1e-12 * sigma.norm()) return {std::move(lower), true};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidInput, "covariance eigendecomposition failed");
  }
  Vector lambda = eig.eigenvalues();
  const double lambda_max = std::max(lambda.maxCoeff(), 0.0);
  const double floor = -1e-10 * lambda_max;
  if (lambda_max == 0.0) {
    throw Error(ErrorKind::InvalidInput, "covariance has no positive eigenvalue");
  }
  if (lambda.minCoeff() < floor) {
    throw Error(ErrorKind::InvalidInput, "covariance is not positive semidefinite");
  }
  lambda = lambda.cwiseMax(0.0);
  Matrix factor = eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
  return {std::move(factor), false};
}

Matrix standard_normal_matrix(Index rows, Index cols, NormalStream& rng) {
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.normal();
  }
  return g;
}

GaussianSampler::GaussianSampler(Matrix sigma, std::uint64_t seed)
    : sigma_(std::move(sigma)), factor_(factorize_psd(sigma_)), seed_(seed) {}

Matrix GaussianSampler::draw(Index n, NormalStream& rng) const {
  if (n < 1) {
    throw Error(ErrorKind::InvalidParameter, "sample count must be >= 1");
  }
  const Matrix g = standard_normal_matrix(dim(), n, rng);
  if (factor_.lower_triangular) {
    return factor_.factor.triangularView<Eigen::Lower>() * g;
  }
  return factor_.factor * g;
}

SampleSet GaussianSampler::sample(Index n, std::uint64_t stream) const {
  NormalStream rng(derive_seed(seed_, {stream}));
  return SampleSet(draw(n, rng));
}

}  // namespace shrinkcov
