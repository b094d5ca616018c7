#pragma once

#include <complex>
#include <optional>

#include "shrinkcov/estimators.hpp"

namespace shrinkcov {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// p x n complex snapshots; column t is x(t).
class ComplexSampleSet {
 public:
  explicit ComplexSampleSet(CMatrix data);

  const CMatrix& data() const noexcept { return data_; }
  Index dim() const noexcept { return data_.rows(); }
  Index count() const noexcept { return data_.cols(); }

 private:
  CMatrix data_;
};

struct HermitianEstimate {
  CMatrix sigma_hat;
  double rho = 0.0;
  Method method = Method::SampleOnly;
  bool degenerate = false;
};

/// Each column x becomes (Re x; Im x), giving a 2p x n real sample set.
SampleSet stack_real(const ComplexSampleSet& x);

/// Inverse of stack_real.
ComplexSampleSet unstack_samples(const SampleSet& stacked);

/// Maps a 2p x 2p real covariance with blocks [rr ri; ir ii] to the
/// p x p complex covariance (rr + ii) + j (ir - ri).
CMatrix unstack_cov(const Matrix& sigma_s);

struct ComplexEstimateOptions {
  /// Dimension used inside the coefficient formulas. Defaults to 2p,
  /// the stacked problem's size.
  std::optional<Index> coefficient_dim;
};

/// Real shrinkage applied to the stacked samples, mapped back to complex.
/// Method::Oracle is rejected; the beamforming harness handles the
/// clairvoyant case with the true covariance directly.
HermitianEstimate estimate_complex(const ComplexSampleSet& x, Method method,
                                   const ComplexEstimateOptions& options = {});

}  // namespace shrinkcov
