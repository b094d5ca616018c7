#include "shrinkcov/complexcov.hpp"

#include <algorithm>

#include "shrinkcov/error.hpp"

namespace shrinkcov {

ComplexSampleSet::ComplexSampleSet(CMatrix data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw Error(ErrorKind::InvalidInput, "complex sample set needs p, n >= 1");
  }
  if (!data_.allFinite()) {
    throw Error(ErrorKind::InvalidInput,
                "complex sample set has non-finite entries");
  }
}

SampleSet stack_real(const ComplexSampleSet& x) {
  const Index p = x.dim();
  Matrix stacked(2 * p, x.count());
  stacked.topRows(p) = x.data().real();
  stacked.bottomRows(p) = x.data().imag();
  return SampleSet(std::move(stacked));
}

ComplexSampleSet unstack_samples(const SampleSet& stacked) {
  if (stacked.dim() % 2 != 0) {
    throw Error(ErrorKind::ShapeMismatch, "stacked samples need an even dimension");
  }
  const Index p = stacked.dim() / 2;
  CMatrix x(p, stacked.count());
  x.real() = stacked.data().topRows(p);
  x.imag() = stacked.data().bottomRows(p);
  return ComplexSampleSet(std::move(x));
}

CMatrix unstack_cov(const Matrix& sigma_s) {
  if (sigma_s.rows() != sigma_s.cols() || sigma_s.rows() % 2 != 0 ||
      sigma_s.rows() == 0) {
    throw Error(ErrorKind::ShapeMismatch,
                "stacked covariance must be 2p x 2p");
  }
  const double scale = std::max(sigma_s.cwiseAbs().maxCoeff(), 1e-300);
  if ((sigma_s - sigma_s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorKind::InvalidInput, "stacked covariance is not symmetric");
  }
  const Index p = sigma_s.rows() / 2;
  const auto rr = sigma_s.topLeftCorner(p, p);
  const auto ri = sigma_s.topRightCorner(p, p);
  const auto ir = sigma_s.bottomLeftCorner(p, p);
  const auto ii = sigma_s.bottomRightCorner(p, p);

  CMatrix out(p, p);
  out.real() = rr + ii;
  out.imag() = ir - ri;
  // Hermitian part.
  CMatrix herm = 0.5 * (out + out.adjoint());
  return herm;
}

HermitianEstimate estimate_complex(const ComplexSampleSet& x, Method method,
                                   const ComplexEstimateOptions& options) {
  if (method == Method::Oracle) {
    throw Error(ErrorKind::InvalidParameter,
                "complex estimation supports SampleOnly, LW, RBLW and OAS");
  }
  const SampleSet stacked = stack_real(x);
  EstimateOptions real_options;
  real_options.coefficient_dim = options.coefficient_dim;
  const CovEstimate real = estimate(stacked, method, real_options);

  HermitianEstimate out;
  out.sigma_hat = unstack_cov(real.sigma_hat);
  out.rho = real.rho;
  out.method = method;
  out.degenerate = real.degenerate;
  return out;
}

}  // namespace shrinkcov
