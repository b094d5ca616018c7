#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shrinkcov/estimators.hpp"

namespace shrinkcov {

/// One Monte Carlo mean compared against its analytic value.
struct MomentCheck {
  std::string quantity;
  double estimate = 0.0;
  double target = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string check;
  Index trials = 0;
  double z_threshold = 4.0;
  std::vector<MomentCheck> moments;
  /// Largest per-draw relative residual, for identities that must hold
  /// exactly on every draw (norm check at n = 1). Zero otherwise.
  double max_pointwise_residual = 0.0;
  bool pointwise_pass = true;

  bool passed() const;
};

inline constexpr Index kMinVerificationTrials = 10'000;
inline constexpr double kPointwiseTolerance = 1e-10;

/// E Tr(S), E Tr(S^2), E Tr^2(S) for n Gaussian draws with covariance
/// sigma against Tr(Sigma), ((n+1)/n) Tr(Sigma^2) + Tr^2(Sigma)/n and
/// Tr^2(Sigma) + (2/n) Tr(Sigma^2).
VerificationReport verify_wishart_moments(const Matrix& sigma, Index n,
                                          Index trials, std::uint64_t seed,
                                          double z_threshold = 4.0,
                                          unsigned workers = 0);

/// Fourth moments of a column q of the right singular factor Q of a p x n
/// standard Gaussian matrix: E q_j^4 = 3/(n(n+2)), E q_j^2 q_k^2 = 1/(n(n+2)).
/// The cross moment is skipped when q has a single entry.
VerificationReport verify_haar_moments(Index p, Index n, Index trials,
                                       std::uint64_t seed,
                                       double z_threshold = 4.0,
                                       unsigned workers = 0);

/// Total-expectation form of the conditional fourth-norm identity:
/// E ||x_1||^4 = (n/(n+2)) E[2 Tr(S^2) + Tr^2(S)], both sides from the same
/// draws. At n = 1 the identity is also checked draw by draw.
VerificationReport verify_norm_moment(const Matrix& sigma, Index n,
                                      Index trials, std::uint64_t seed,
                                      double z_threshold = 4.0,
                                      unsigned workers = 0);

}  // namespace shrinkcov
