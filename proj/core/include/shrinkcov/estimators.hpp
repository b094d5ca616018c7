#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <vector>

namespace shrinkcov {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Method { SampleOnly, Oracle, LW, RBLW, OAS };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

/// p x n real observations; column i is x_i.
class SampleSet {
 public:
  explicit SampleSet(Matrix data);

  const Matrix& data() const noexcept { return data_; }
  Index dim() const noexcept { return data_.rows(); }
  Index count() const noexcept { return data_.cols(); }

 private:
  Matrix data_;
};

/// S = (1/n) sum_i x_i x_i^T, stored exactly symmetric.
class SampleCov {
 public:
  /// Wraps an existing symmetric PSD matrix. Symmetry is checked; the
  /// matrix is re-symmetrized. PSD is the caller's responsibility.
  static SampleCov from_matrix(Matrix s, Index n);

  const Matrix& matrix() const noexcept { return s_; }
  Index dim() const noexcept { return s_.rows(); }
  Index count() const noexcept { return n_; }

 private:
  SampleCov(Matrix s, Index n) : s_(std::move(s)), n_(n) {}
  friend SampleCov sample_covariance(const SampleSet& x);

  Matrix s_;
  Index n_;
};

SampleCov sample_covariance(const SampleSet& x);

/// F = (Tr(S)/p) I.
Matrix shrinkage_target(const SampleCov& s);

/// (1 - rho) S + rho F.
Matrix shrink(const SampleCov& s, double rho);

/// Relative threshold below which S counts as a scaled identity:
/// Tr(S^2) - Tr^2(S)/p <= kSphericityTolerance * Tr^2(S).
inline constexpr double kSphericityTolerance = 1e-12;

/// Scalar summaries of S shared by every coefficient rule.
struct ShrinkageStatistics {
  double tr_s = 0.0;
  double tr_s2 = 0.0;
  /// Tr(S^2) - Tr^2(S)/p, clamped at zero.
  double dispersion = 0.0;
  double phi = 0.0;
  /// Sphericity statistic.
  double u = 0.0;
  Index p = 0;
  Index n = 0;
  bool spherical = false;
};

/// Throws DegenerateSample when Tr(S) == 0 and DegenerateDimension when
/// the coefficient dimension is 1. `coefficient_dim` replaces p in the
/// formulas (defaults to S's size).
ShrinkageStatistics statistics(const SampleCov& s,
                               std::optional<Index> coefficient_dim = {});

/// MSE-optimal coefficient for Gaussian samples with known covariance.
double oracle_rho(const Matrix& sigma, Index n);
double oracle_rho(double tr_sigma, double tr_sigma2, Index p, Index n);

/// A data-driven coefficient before and after clamping to [0, 1].
/// On a spherical S both fields are 1 and `degenerate` is set.
struct Coefficient {
  double raw = 0.0;
  double clamped = 0.0;
  bool degenerate = false;
};

/// Ledoit-Wolf. `s` must be the sample covariance of `x`.
Coefficient lw_rho(const SampleSet& x, const SampleCov& s,
                   const ShrinkageStatistics& stats);
Coefficient lw_rho(const SampleSet& x, const SampleCov& s);

/// Rao-Blackwellized Ledoit-Wolf.
Coefficient rblw_rho(const ShrinkageStatistics& stats);
Coefficient rblw_rho(const SampleCov& s);

/// Oracle-approximating shrinkage: min(1 / ((n + 1 - 2/p) phi), 1).
/// `raw` holds the unclamped value.
Coefficient oas_coefficient(const ShrinkageStatistics& stats);
double oas_rho(const ShrinkageStatistics& stats);
double oas_rho(const SampleCov& s);

/// Iterates of the oracle re-substitution map, run through its scalar form.
struct OasTrace {
  std::vector<double> rho;  // rho[0] is the initial guess
  bool converged = false;

  Index iterations() const noexcept {
    return static_cast<Index>(rho.size()) - 1;
  }
  double limit() const { return rho.back(); }
  /// Sigma_j, materialized on request.
  Matrix sigma(const SampleCov& s, Index j) const;
};

OasTrace oas_iterate(const ShrinkageStatistics& stats, double rho0,
                     int max_iter, double tol);
OasTrace oas_iterate(const SampleCov& s, double rho0, int max_iter, double tol);

/// rho = min(alpha + beta / U, 1).
struct RhoParams {
  double alpha = 0.0;
  double beta = 0.0;

  static RhoParams oas(Index p, Index n);
  static RhoParams rblw(Index p, Index n);
};

/// Returns 1 for u == 0.
double rho_param(const RhoParams& params, double u);
double rho_param_unclamped(const RhoParams& params, double u);

struct CovEstimate {
  Matrix sigma_hat;
  double rho = 0.0;
  Method method = Method::SampleOnly;
  bool degenerate = false;
};

struct EstimateOptions {
  /// Required by Method::Oracle.
  std::optional<Matrix> true_sigma;
  /// Dimension used inside the coefficient formulas, if not S's size.
  std::optional<Index> coefficient_dim;
};

CovEstimate estimate(const SampleSet& x, Method method,
                     const EstimateOptions& options = {});

/// Same as above with S and its statistics already computed. `stats` may be
/// null for SampleOnly.
CovEstimate estimate(const SampleSet& x, const SampleCov& s,
                     const ShrinkageStatistics* stats, Method method,
                     const EstimateOptions& options = {});

}  // namespace shrinkcov
