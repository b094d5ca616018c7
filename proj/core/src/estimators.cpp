#include "shrinkcov/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shrinkcov/error.hpp"

namespace shrinkcov {

namespace {

double dimension(Index p) { return static_cast<double>(p); }

Coefficient degenerate_coefficient() { return {1.0, 1.0, true}; }

Coefficient clamp_coefficient(double raw) {
  return {raw, std::clamp(raw, 0.0, 1.0), false};
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::SampleOnly: return "SampleOnly";
    case Method::Oracle: return "Oracle";
    case Method::LW: return "LW";
    case Method::RBLW: return "RBLW";
    case Method::OAS: return "OAS";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::SampleOnly, Method::Oracle, Method::LW,
                   Method::RBLW, Method::OAS}) {
    if (name == to_string(m)) return m;
  }
  if (name == "Sample" || name == "sample") return Method::SampleOnly;
  if (name == "oracle" || name == "Clairvoyant" || name == "clairvoyant") {
    return Method::Oracle;
  }
  if (name == "lw") return Method::LW;
  if (name == "rblw") return Method::RBLW;
  if (name == "oas") return Method::OAS;
  return std::nullopt;
}

SampleSet::SampleSet(Matrix data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw Error(ErrorKind::InvalidInput,
                "sample set needs p >= 1 and n >= 1, got " +
                    std::to_string(data_.rows()) + "x" +
                    std::to_string(data_.cols()));
  }
  if (!data_.allFinite()) {
    throw Error(ErrorKind::InvalidInput, "sample set has non-finite entries");
  }
}

SampleCov SampleCov::from_matrix(Matrix s, Index n) {
  if (s.rows() != s.cols() || s.rows() < 1) {
    throw Error(ErrorKind::InvalidInput, "sample covariance must be square");
  }
  if (n < 1) {
    throw Error(ErrorKind::InvalidInput, "sample count must be positive");
  }
  if (!s.allFinite()) {
    throw Error(ErrorKind::InvalidInput,
                "sample covariance has non-finite entries");
  }
  const double scale = std::max(s.cwiseAbs().maxCoeff(), 1e-300);
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorKind::InvalidInput, "sample covariance is not symmetric");
  }
  Matrix sym = 0.5 * (s + s.transpose());
  return SampleCov(std::move(sym), n);
}

SampleCov sample_covariance(const SampleSet& x) {
  const Index p = x.dim();
  const Index n = x.count();
  Matrix s = Matrix::Zero(p, p);
  s.selfadjointView<Eigen::Lower>().rankUpdate(x.data(),
                                               1.0 / static_cast<double>(n));
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return SampleCov(std::move(s), n);
}

Matrix shrinkage_target(const SampleCov& s) {
  const Index p = s.dim();
  return Matrix::Identity(p, p) * (s.matrix().trace() / dimension(p));
}

Matrix shrink(const SampleCov& s, double rho) {
  const Index p = s.dim();
  const double mu = s.matrix().trace() / dimension(p);
  Matrix out = (1.0 - rho) * s.matrix();
  out.diagonal().array() += rho * mu;
  return out;
}

ShrinkageStatistics statistics(const SampleCov& s,
                               std::optional<Index> coefficient_dim) {
  const Index p = coefficient_dim.value_or(s.dim());
  if (p < 2) {
    throw Error(ErrorKind::DegenerateDimension,
                "shrinkage toward a scaled identity needs p >= 2");
  }
  ShrinkageStatistics st;
  st.p = p;
  st.n = s.count();
  st.tr_s = s.matrix().trace();
  st.tr_s2 = s.matrix().squaredNorm();
  if (!(st.tr_s > 0.0)) {
    throw Error(ErrorKind::DegenerateSample,
                "sample covariance has zero trace (all-zero samples)");
  }
  const double pd = dimension(p);
  const double tr2 = st.tr_s * st.tr_s;
  const double disp = st.tr_s2 - tr2 / pd;
  st.spherical = disp <= kSphericityTolerance * tr2;
  if (st.spherical) {
    st.dispersion = 0.0;
    st.phi = 0.0;
    st.u = 0.0;
  } else {
    st.dispersion = disp;
    st.phi = disp / (st.tr_s2 + tr2);
    st.u = (pd * st.tr_s2 / tr2 - 1.0) / (pd - 1.0);
  }
  return st;
}

double oracle_rho(double tr_sigma, double tr_sigma2, Index p, Index n) {
  if (p < 2) {
    throw Error(ErrorKind::DegenerateDimension, "oracle coefficient needs p >= 2");
  }
  if (n < 1) {
    throw Error(ErrorKind::InvalidParameter, "oracle coefficient needs n >= 1");
  }
  if (!(tr_sigma > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "true covariance has zero trace");
  }
  const double pd = dimension(p);
  const double nd = static_cast<double>(n);
  const double tr2 = tr_sigma * tr_sigma;
  const double num = (1.0 - 2.0 / pd) * tr_sigma2 + tr2;
  const double den = (nd + 1.0 - 2.0 / pd) * tr_sigma2 + (1.0 - nd / pd) * tr2;
  // den - num = n (Tr(Sigma^2) - Tr^2(Sigma)/p) >= 0 for PSD Sigma.
  if (!(den > 0.0) || den < num * (1.0 - 1e-12)) {
    throw Error(ErrorKind::InvalidInput,
                "oracle coefficient: true covariance is not PSD");
  }
  return std::min(num / den, 1.0);
}

double oracle_rho(const Matrix& sigma, Index n) {
  if (sigma.rows() != sigma.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "true covariance must be square");
  }
  return oracle_rho(sigma.trace(), sigma.squaredNorm(), sigma.rows(), n);
}

Coefficient lw_rho(const SampleSet& x, const SampleCov& s,
                   const ShrinkageStatistics& st) {
  if (x.dim() != s.dim() || x.count() != s.count()) {
    throw Error(ErrorKind::ShapeMismatch,
                "lw_rho: sample covariance was not built from these samples");
  }
  if (st.spherical) return degenerate_coefficient();
  // sum_i ||x_i x_i^T - S||_F^2 = sum_i ||x_i||^4 - n Tr(S^2).
  const double n = static_cast<double>(x.count());
  const double fourth = x.data().colwise().squaredNorm().array().square().sum();
  const double num = std::max(fourth - n * st.tr_s2, 0.0);
  return clamp_coefficient(num / (n * n * st.dispersion));
}

Coefficient lw_rho(const SampleSet& x, const SampleCov& s) {
  return lw_rho(x, s, statistics(s));
}

Coefficient rblw_rho(const ShrinkageStatistics& st) {
  if (st.spherical) return degenerate_coefficient();
  const double n = static_cast<double>(st.n);
  const double num = (n - 2.0) / n * st.tr_s2 + st.tr_s * st.tr_s;
  return clamp_coefficient(num / ((n + 2.0) * st.dispersion));
}

Coefficient rblw_rho(const SampleCov& s) { return rblw_rho(statistics(s)); }

Coefficient oas_coefficient(const ShrinkageStatistics& st) {
  if (st.spherical) return degenerate_coefficient();
  const double n = static_cast<double>(st.n);
  const double p = dimension(st.p);
  const double num = st.tr_s2 + st.tr_s * st.tr_s;
  const double raw = num / ((n + 1.0 - 2.0 / p) * st.dispersion);
  return {raw, std::min(raw, 1.0), false};
}

double oas_rho(const ShrinkageStatistics& st) {
  return oas_coefficient(st).clamped;
}

double oas_rho(const SampleCov& s) { return oas_rho(statistics(s)); }

Matrix OasTrace::sigma(const SampleCov& s, Index j) const {
  if (j < 0 || j >= static_cast<Index>(rho.size())) {
    throw Error(ErrorKind::InvalidParameter, "oas iterate index out of range");
  }
  return shrink(s, rho[static_cast<std::size_t>(j)]);
}

OasTrace oas_iterate(const ShrinkageStatistics& st, double rho0, int max_iter,
                     double tol) {
  if (!(rho0 >= 0.0 && rho0 <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "oas_iterate: rho0 must be in [0,1]");
  }
  if (max_iter < 1 || !(tol > 0.0)) {
    throw Error(ErrorKind::InvalidParameter,
                "oas_iterate: need max_iter >= 1 and tol > 0");
  }
  const double n = static_cast<double>(st.n);
  const double p = dimension(st.p);
  const double phi = st.phi;
  const double a = (1.0 - 2.0 / p) * phi;
  const double b = (n + 1.0 - 2.0 / p) * phi;
  const double c = 1.0 + n * phi;

  OasTrace trace;
  trace.rho.reserve(static_cast<std::size_t>(std::min(max_iter, 1024)) + 1);
  trace.rho.push_back(rho0);
  double rho = rho0;
  for (int j = 0; j < max_iter; ++j) {
    const double next = (1.0 - a * rho) / (c - b * rho);
    trace.rho.push_back(next);
    const double step = std::abs(next - rho);
    rho = next;
    if (step < tol) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

OasTrace oas_iterate(const SampleCov& s, double rho0, int max_iter, double tol) {
  return oas_iterate(statistics(s), rho0, max_iter, tol);
}

RhoParams RhoParams::oas(Index p, Index n) {
  const double pd = dimension(p);
  const double k = static_cast<double>(n) + 1.0 - 2.0 / pd;
  return {1.0 / k, (pd + 1.0) / (k * (pd - 1.0))};
}

RhoParams RhoParams::rblw(Index p, Index n) {
  const double pd = dimension(p);
  const double nd = static_cast<double>(n);
  const double d = nd * (nd + 2.0);
  return {(nd - 2.0) / d, ((pd + 1.0) * nd - 2.0) / (d * (pd - 1.0))};
}

double rho_param_unclamped(const RhoParams& params, double u) {
  if (u < 0.0) {
    throw Error(ErrorKind::InvalidParameter, "sphericity statistic must be >= 0");
  }
  return params.alpha + params.beta / u;
}

double rho_param(const RhoParams& params, double u) {
  if (u == 0.0) return 1.0;
  return std::min(rho_param_unclamped(params, u), 1.0);
}

CovEstimate estimate(const SampleSet& x, const SampleCov& s,
                     const ShrinkageStatistics* stats, Method method,
                     const EstimateOptions& options) {
  CovEstimate out;
  out.method = method;
  if (method == Method::SampleOnly) {
    out.sigma_hat = s.matrix();
    out.rho = 0.0;
    return out;
  }

  std::optional<ShrinkageStatistics> local;
  if (stats == nullptr) {
    local = statistics(s, options.coefficient_dim);
    stats = &*local;
  }

  switch (method) {
    case Method::Oracle: {
      if (!options.true_sigma) {
        throw Error(ErrorKind::MissingParameter,
                    "Oracle estimate requires the true covariance");
      }
      const Matrix& sigma = *options.true_sigma;
      if (sigma.rows() != s.dim() || sigma.cols() != s.dim()) {
        throw Error(ErrorKind::ShapeMismatch,
                    "true covariance does not match the sample dimension");
      }
      out.rho = oracle_rho(sigma.trace(), sigma.squaredNorm(), stats->p,
                           s.count());
      break;
    }
    case Method::LW: {
      const Coefficient c = lw_rho(x, s, *stats);
      out.rho = c.clamped;
      out.degenerate = c.degenerate;
      break;
    }
    case Method::RBLW: {
      const Coefficient c = rblw_rho(*stats);
      out.rho = c.clamped;
      out.degenerate = c.degenerate;
      break;
    }
    case Method::OAS: {
      const Coefficient c = oas_coefficient(*stats);
      out.rho = c.clamped;
      out.degenerate = c.degenerate;
      break;
    }
    case Method::SampleOnly:
      break;
  }
  out.sigma_hat = shrink(s, out.rho);
  return out;
}

CovEstimate estimate(const SampleSet& x, Method method,
                     const EstimateOptions& options) {
  const SampleCov s = sample_covariance(x);
  return estimate(x, s, nullptr, method, options);
}

}  // namespace shrinkcov
