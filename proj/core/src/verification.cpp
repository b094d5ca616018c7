#include "shrinkcov/verification.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "shrinkcov/error.hpp"
#include "shrinkcov/models.hpp"
#include "shrinkcov/montecarlo.hpp"
#include "shrinkcov/parallel.hpp"

namespace shrinkcov {

namespace {

void require_trials(Index trials) {
  if (trials < kMinVerificationTrials) {
    throw Error(ErrorKind::InvalidParameter,
                "verification needs at least " +
                    std::to_string(kMinVerificationTrials) + " trials, got " +
                    std::to_string(trials));
  }
}

// `scale` is the magnitude the quantity is computed at; a difference within
// rounding of it counts as exact agreement.
MomentCheck compare(std::string quantity, std::span<const double> draws,
                    double target, double z_threshold, double scale = 0.0) {
  const MeanCi stats = mean_ci(draws);
  MomentCheck c;
  c.quantity = std::move(quantity);
  c.estimate = stats.mean;
  c.target = target;
  c.std_error = stats.sd / std::sqrt(static_cast<double>(draws.size()));
  const double diff = c.estimate - c.target;
  scale = std::max({scale, std::abs(c.target), std::abs(c.estimate), 1.0});
  if (std::abs(diff) <= kPointwiseTolerance * scale) {
    c.z = 0.0;
  } else if (c.std_error > 0.0) {
    c.z = diff / c.std_error;
  } else {
    c.z = std::copysign(HUGE_VAL, diff);
  }
  c.pass = std::abs(c.z) <= z_threshold;
  return c;
}

}  // namespace

bool VerificationReport::passed() const {
  if (!pointwise_pass) return false;
  return std::all_of(moments.begin(), moments.end(),
                     [](const MomentCheck& m) { return m.pass; });
}

VerificationReport verify_wishart_moments(const Matrix& sigma, Index n,
                                          Index trials, std::uint64_t seed,
                                          double z_threshold,
                                          unsigned workers) {
  require_trials(trials);
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "need n >= 1");
  const GaussianSampler sampler(sigma, seed);
  const std::size_t count = static_cast<std::size_t>(trials);
  std::vector<double> tr(count), tr_sq(count), sq_tr(count);

  parallel_for(count, workers, [&](std::size_t t) {
    const SampleCov s = sample_covariance(sampler.sample(n, t));
    const double trace = s.matrix().trace();
    tr[t] = trace;
    tr_sq[t] = s.matrix().squaredNorm();
    sq_tr[t] = trace * trace;
  });

  const double nd = static_cast<double>(n);
  const double tr_sigma = sigma.trace();
  const double tr_sigma2 = sigma.squaredNorm();

  VerificationReport report;
  report.check = "wishart";
  report.trials = trials;
  report.z_threshold = z_threshold;
  report.moments.push_back(compare("E Tr(S)", tr, tr_sigma, z_threshold));
  report.moments.push_back(
      compare("E Tr(S^2)", tr_sq,
              (nd + 1.0) / nd * tr_sigma2 + tr_sigma * tr_sigma / nd,
              z_threshold));
  report.moments.push_back(
      compare("E Tr^2(S)", sq_tr,
              tr_sigma * tr_sigma + 2.0 / nd * tr_sigma2, z_threshold));
  return report;
}

VerificationReport verify_haar_moments(Index p, Index n, Index trials,
                                       std::uint64_t seed, double z_threshold,
                                       unsigned workers) {
  require_trials(trials);
  if (p < 1 || n < 1) throw Error(ErrorKind::InvalidParameter, "need p, n >= 1");
  const Index r = std::min(p, n);
  const std::size_t count = static_cast<std::size_t>(trials);
  std::vector<double> fourth(count), cross(count);

  parallel_for(count, workers, [&](std::size_t t) {
    NormalStream rng(derive_seed(seed, {t}));
    const Matrix x = standard_normal_matrix(p, n, rng);
    // X = H Lambda Q with Q = V^T (r x n); column 0 of Q is row 0 of V.
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinV);
    const Vector q = svd.matrixV().row(0).transpose();
    fourth[t] = std::pow(q(0), 4);
    cross[t] = r >= 2 ? q(0) * q(0) * q(1) * q(1) : 0.0;
  });

  const double nd = static_cast<double>(n);
  VerificationReport report;
  report.check = "haar";
  report.trials = trials;
  report.z_threshold = z_threshold;
  report.moments.push_back(
      compare("E q_j^4", fourth, 3.0 / (nd * (nd + 2.0)), z_threshold));
  if (r >= 2) {
    report.moments.push_back(
        compare("E q_j^2 q_k^2", cross, 1.0 / (nd * (nd + 2.0)), z_threshold));
  }
  return report;
}

VerificationReport verify_norm_moment(const Matrix& sigma, Index n,
                                      Index trials, std::uint64_t seed,
                                      double z_threshold, unsigned workers) {
  require_trials(trials);
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "need n >= 1");
  const GaussianSampler sampler(sigma, seed);
  const std::size_t count = static_cast<std::size_t>(trials);
  const double nd = static_cast<double>(n);
  std::vector<double> lhs(count), rhs(count), diff(count), residual(count);

  parallel_for(count, workers, [&](std::size_t t) {
    const SampleSet x = sampler.sample(n, t);
    const SampleCov s = sample_covariance(x);
    const double norm2 = x.data().col(0).squaredNorm();
    const double trace = s.matrix().trace();
    lhs[t] = norm2 * norm2;
    rhs[t] = nd / (nd + 2.0) * (2.0 * s.matrix().squaredNorm() + trace * trace);
    diff[t] = lhs[t] - rhs[t];
    residual[t] = lhs[t] > 0.0 ? std::abs(diff[t]) / lhs[t] : 0.0;
  });

  VerificationReport report;
  report.check = "norm";
  report.trials = trials;
  report.z_threshold = z_threshold;
  const double lhs_mean = mean_ci(lhs).mean;
  const double rhs_mean = mean_ci(rhs).mean;
  report.moments.push_back(compare("E||x||^4 - n/(n+2) E[2Tr(S^2)+Tr^2(S)]",
                                   diff, 0.0, z_threshold, lhs_mean));

  // Informational: each side against the other side's mean.
  MomentCheck left = compare("E||x||^4", lhs, rhs_mean, HUGE_VAL);
  MomentCheck right = compare("n/(n+2) E[2Tr(S^2)+Tr^2(S)]", rhs, lhs_mean, HUGE_VAL);
  report.moments.push_back(left);
  report.moments.push_back(right);

  if (n == 1) {
    report.max_pointwise_residual =
        *std::max_element(residual.begin(), residual.end());
    report.pointwise_pass = report.max_pointwise_residual <= kPointwiseTolerance;
  }
  return report;
}

}  // namespace shrinkcov
