#include "shrinkcov/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "shrinkcov/error.hpp"
#include "shrinkcov/parallel.hpp"

namespace shrinkcov {

namespace {

constexpr double kZ95 = 1.96;

std::string cell_context(std::size_t trial, Index n, Method method) {
  return "trial " + std::to_string(trial) + ", n=" + std::to_string(n) +
         ", method=" + std::string(to_string(method));
}

}  // namespace

const ResultRow& ExperimentResult::at(Index n, Method method) const {
  for (const ResultRow& row : rows) {
    if (row.n == n && row.method == method) return row;
  }
  throw Error(ErrorKind::InvalidParameter,
              "no result for n=" + std::to_string(n) + ", method=" +
                  std::string(to_string(method)));
}

Index ExperimentConfig::dim() const {
  return std::visit(
      [](const auto& m) -> Index {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CovModel>) {
          return m.dim();
        } else {
          return m.p;
        }
      },
      model);
}

void ExperimentConfig::validate() const {
  if (trials < 1) {
    throw Error(ErrorKind::InvalidParameter, "trials must be >= 1");
  }
  if (n_grid.empty()) {
    throw Error(ErrorKind::InvalidParameter, "n grid must not be empty");
  }
  for (Index n : n_grid) {
    if (n < 1) throw Error(ErrorKind::InvalidParameter, "every n must be >= 1");
  }
  if (methods.empty()) {
    throw Error(ErrorKind::InvalidParameter, "at least one method is required");
  }
  if (const auto* sc = std::get_if<UlaScenario>(&model)) sc->validate();
}

MeanCi mean_ci(std::span<const double> values) {
  MeanCi out;
  if (values.empty()) return out;
  const double count = static_cast<double>(values.size());

  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  out.mean = (sum + comp) / count;

  if (values.size() > 1) {
    double ss = 0.0;
    double ss_comp = 0.0;
    for (double v : values) {
      const double d = (v - out.mean) * (v - out.mean);
      const double t = ss + d;
      ss_comp += ss >= d ? (ss - t) + d : (d - t) + ss;
      ss = t;
    }
    out.sd = std::sqrt((ss + ss_comp) / (count - 1.0));
    out.ci95 = kZ95 * out.sd / std::sqrt(count);
  }
  return out;
}

double mse_frobenius(const Matrix& estimate, const Matrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw Error(ErrorKind::ShapeMismatch,
                "mse_frobenius: estimate and truth differ in shape");
  }
  return (estimate - truth).squaredNorm();
}

ExperimentResult run_mse_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto* model = std::get_if<CovModel>(&cfg.model);
  if (model == nullptr) {
    throw Error(ErrorKind::InvalidParameter,
                "MSE experiment needs a covariance model");
  }
  const Matrix& sigma = model->covariance();
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t n_methods = cfg.methods.size();

  EstimateOptions options;
  options.true_sigma = sigma;

  ExperimentResult result;
  result.metric = Metric::Mse;

  for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
    const Index n = cfg.n_grid[ni];
    const GaussianSampler sampler(sigma, derive_seed(cfg.seed, {ni}));
    std::vector<double> loss(trials * n_methods);
    std::vector<double> rho(trials * n_methods);

    parallel_for(trials, cfg.workers, [&](std::size_t t) {
      const SampleSet x = sampler.sample(n, t);
      const SampleCov s = sample_covariance(x);
      std::optional<ShrinkageStatistics> st;
      for (std::size_t m = 0; m < n_methods; ++m) {
        const Method method = cfg.methods[m];
        try {
          if (!st && method != Method::SampleOnly) st = statistics(s);
          const CovEstimate est =
              estimate(x, s, st ? &*st : nullptr, method, options);
          loss[t * n_methods + m] = mse_frobenius(est.sigma_hat, sigma);
          rho[t * n_methods + m] = est.rho;
        } catch (const Error& e) {
          throw Error(ErrorKind::ExperimentFailed,
                      cell_context(t, n, method) + ": " + e.what());
        }
      }
    });

    std::vector<double> column(trials);
    for (std::size_t m = 0; m < n_methods; ++m) {
      ResultRow row;
      row.n = n;
      row.method = cfg.methods[m];
      for (std::size_t t = 0; t < trials; ++t) column[t] = loss[t * n_methods + m];
      const MeanCi mse = mean_ci(column);
      for (std::size_t t = 0; t < trials; ++t) column[t] = rho[t * n_methods + m];
      row.mean = mse.mean;
      row.ci95 = mse.ci95;
      row.mean_rho = mean_ci(column).mean;
      row.trials_used = cfg.trials;
      result.rows.push_back(row);
    }
  }
  return result;
}

ExperimentResult run_sinr_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto* scenario = std::get_if<UlaScenario>(&cfg.model);
  if (scenario == nullptr) {
    throw Error(ErrorKind::InvalidParameter,
                "SINR experiment needs an array scenario");
  }
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t n_methods = cfg.methods.size();
  const CVector a_s = array_response(scenario->p, scenario->signal().omega);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // The clairvoyant beamformer does not depend on the data.
  std::optional<double> clairvoyant_sinr;
  for (Method m : cfg.methods) {
    if (m == Method::Oracle) {
      clairvoyant_sinr =
          sinr(capon_weights(true_cov(*scenario), a_s, "true"), *scenario);
    }
  }

  ComplexEstimateOptions options;
  options.coefficient_dim = cfg.coefficient_dim;

  ExperimentResult result;
  result.metric = Metric::SinrDb;

  for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
    const Index n = cfg.n_grid[ni];
    std::vector<double> value(trials * n_methods, nan);
    std::vector<double> rho(trials * n_methods, nan);

    parallel_for(trials, cfg.workers, [&](std::size_t t) {
      NormalStream rng(derive_seed(cfg.seed, {ni, t}));
      const ComplexSampleSet x = draw_snapshots(*scenario, n, rng);
      for (std::size_t m = 0; m < n_methods; ++m) {
        const Method method = cfg.methods[m];
        if (method == Method::Oracle) {
          value[t * n_methods + m] = *clairvoyant_sinr;
          continue;
        }
        try {
          const HermitianEstimate est = estimate_complex(x, method, options);
          const BeamWeights w =
              capon_weights(est.sigma_hat, a_s, to_string(method));
          value[t * n_methods + m] = sinr(w, *scenario);
          rho[t * n_methods + m] = est.rho;
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::SingularMatrix) continue;  // excluded
          throw Error(ErrorKind::ExperimentFailed,
                      cell_context(t, n, method) + ": " + e.what());
        }
      }
    });

    for (std::size_t m = 0; m < n_methods; ++m) {
      std::vector<double> used;
      std::vector<double> rhos;
      used.reserve(trials);
      for (std::size_t t = 0; t < trials; ++t) {
        const double v = value[t * n_methods + m];
        if (std::isnan(v)) continue;
        used.push_back(v);
        rhos.push_back(rho[t * n_methods + m]);
      }
      ResultRow row;
      row.n = n;
      row.method = cfg.methods[m];
      row.trials_used = static_cast<Index>(used.size());
      row.excluded = cfg.trials - row.trials_used;
      if (static_cast<double>(row.excluded) >
          kMaxExcludedFraction * static_cast<double>(cfg.trials)) {
        throw Error(ErrorKind::ExperimentFailed,
                    "n=" + std::to_string(n) + ", method=" +
                        std::string(to_string(row.method)) + ": " +
                        std::to_string(row.excluded) + " of " +
                        std::to_string(cfg.trials) +
                        " trials had a singular covariance estimate");
      }
      const MeanCi lin = mean_ci(used);
      row.mean = linear_to_db(lin.mean);
      row.ci95 = 10.0 / std::numbers::ln10 * lin.ci95 / lin.mean;
      row.mean_rho = row.method == Method::Oracle ? nan : mean_ci(rhos).mean;
      result.rows.push_back(row);
    }
  }
  return result;
}

}  // namespace shrinkcov
