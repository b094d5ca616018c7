#include "shrinkcov/beamform.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "shrinkcov/error.hpp"

namespace shrinkcov {

namespace {

// Everything except the signal index, which true_cov does not need.
void check_array(const UlaScenario& sc) {
  if (sc.p < 1) throw Error(ErrorKind::InvalidParameter, "array needs p >= 1");
  if (!(sc.noise_power > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "noise power must be positive");
  }
  for (const Source& s : sc.sources) {
    if (!(s.power > 0.0) || !std::isfinite(s.omega)) {
      throw Error(ErrorKind::InvalidParameter,
                  "source powers must be positive and frequencies finite");
    }
  }
}

}  // namespace

void UlaScenario::validate() const {
  check_array(*this);
  if (signal_index >= sources.size()) {
    throw Error(ErrorKind::InvalidParameter, "signal index out of range");
  }
}

UlaScenario UlaScenario::reference(Index p, double signal_db,
                                   double interference_db, double theta_s_deg,
                                   double theta_i1_deg, double gamma) {
  constexpr double deg = std::numbers::pi / 180.0;
  const double omega_s = spatial_frequency(theta_s_deg * deg);
  UlaScenario sc;
  sc.p = p;
  sc.noise_power = 1.0;
  sc.signal_index = 0;
  sc.sources = {
      {omega_s, db_to_linear(signal_db)},
      {spatial_frequency(theta_i1_deg * deg), db_to_linear(interference_db)},
      {omega_s + 2.0 * std::numbers::pi * gamma / static_cast<double>(p),
       db_to_linear(interference_db)},
  };
  return sc;
}

double spatial_frequency(double theta_rad) {
  return std::numbers::pi * std::sin(theta_rad);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double value) { return 10.0 * std::log10(value); }

CVector array_response(Index p, double omega) {
  CVector a(p);
  for (Index k = 0; k < p; ++k) {
    a(k) = std::polar(1.0, -omega * static_cast<double>(k));
  }
  return a;
}

namespace {

CMatrix accumulate_cov(const UlaScenario& sc, bool include_signal) {
  if (include_signal) {
    check_array(sc);
  } else {
    sc.validate();
  }
  CMatrix sigma = CMatrix::Identity(sc.p, sc.p) * sc.noise_power;
  for (std::size_t k = 0; k < sc.sources.size(); ++k) {
    if (!include_signal && k == sc.signal_index) continue;
    const CVector a = array_response(sc.p, sc.sources[k].omega);
    sigma.noalias() += sc.sources[k].power * (a * a.adjoint());
  }
  return 0.5 * (sigma + sigma.adjoint());
}

}  // namespace

CMatrix true_cov(const UlaScenario& scenario) {
  return accumulate_cov(scenario, true);
}

CMatrix interference_plus_noise_cov(const UlaScenario& scenario) {
  return accumulate_cov(scenario, false);
}

BeamWeights capon_weights(const CMatrix& sigma, const CVector& a_s,
                          std::string_view origin) {
  if (sigma.rows() != sigma.cols() || sigma.rows() != a_s.size()) {
    throw Error(ErrorKind::ShapeMismatch, "capon_weights: dimension mismatch");
  }
  Eigen::LLT<CMatrix> llt(sigma);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14)) {
    throw Error(ErrorKind::SingularMatrix,
                "capon_weights: " + std::string(origin) +
                    " covariance is numerically singular");
  }
  const CVector solved = llt.solve(a_s);
  const Complex denom = a_s.dot(solved);  // a^H Sigma^-1 a
  BeamWeights out;
  out.w = solved / denom;
  out.constraint_gain = out.w.dot(a_s);
  return out;
}

double sinr(const BeamWeights& weights, const UlaScenario& scenario) {
  const Source& s = scenario.signal();
  const CVector a_s = array_response(scenario.p, s.omega);
  const CMatrix r_in = interference_plus_noise_cov(scenario);
  const double gain = std::norm(weights.w.dot(a_s));
  const double denom = weights.w.dot(r_in * weights.w).real();
  if (!(denom > 0.0)) {
    throw Error(ErrorKind::InvalidInput,
                "sinr: interference-plus-noise power must be positive");
  }
  return s.power * gain / denom;
}

ComplexSampleSet draw_snapshots(const UlaScenario& scenario, Index n,
                                NormalStream& rng) {
  scenario.validate();
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "need n >= 1 snapshots");
  const Index p = scenario.p;
  std::vector<CVector> steering;
  steering.reserve(scenario.sources.size());
  for (const Source& s : scenario.sources) {
    steering.push_back(array_response(p, s.omega));
  }
  const double noise_scale = std::sqrt(scenario.noise_power / 2.0);
  CMatrix x(p, n);
  for (Index t = 0; t < n; ++t) {
    CVector col = CVector::Zero(p);
    for (std::size_t k = 0; k < scenario.sources.size(); ++k) {
      const double scale = std::sqrt(scenario.sources[k].power / 2.0);
      const double re = rng.normal();
      const double im = rng.normal();
      col += Complex(scale * re, scale * im) * steering[k];
    }
    for (Index i = 0; i < p; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      col(i) += Complex(noise_scale * re, noise_scale * im);
    }
    x.col(t) = col;
  }
  return ComplexSampleSet(std::move(x));
}

}  // namespace shrinkcov
