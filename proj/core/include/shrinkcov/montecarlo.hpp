#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "shrinkcov/beamform.hpp"
#include "shrinkcov/models.hpp"

namespace shrinkcov {

enum class Metric { Mse, SinrDb };

/// Aggregate for one (n, method) cell.
struct ResultRow {
  Index n = 0;
  Method method = Method::SampleOnly;
  /// Mean squared Frobenius error, or mean SINR in dB.
  double mean = 0.0;
  /// 95% half-width, same units as `mean`.
  double ci95 = 0.0;
  /// Mean realized shrinkage coefficient. NaN where it has no meaning
  /// (clairvoyant beamformer).
  double mean_rho = 0.0;
  Index trials_used = 0;
  Index excluded = 0;
};

struct ExperimentResult {
  Metric metric = Metric::Mse;
  std::vector<ResultRow> rows;

  /// Throws InvalidParameter when the cell is absent.
  const ResultRow& at(Index n, Method method) const;
};

struct ExperimentConfig {
  std::variant<CovModel, UlaScenario> model;
  std::vector<Index> n_grid;
  Index trials = 5000;
  std::uint64_t seed = 0;
  std::vector<Method> methods;
  /// Coefficient dimension for the stacked complex estimators (default 2p).
  std::optional<Index> coefficient_dim;
  /// 0 = machine parallelism. Results do not depend on this.
  unsigned workers = 0;

  Index dim() const;
  void validate() const;
};

/// Fraction of excluded beamforming trials above which a run fails.
inline constexpr double kMaxExcludedFraction = 1e-3;

struct MeanCi {
  double mean = 0.0;
  double sd = 0.0;
  /// 1.96 * sd / sqrt(count); zero for a single value.
  double ci95 = 0.0;
};

/// Compensated summation in index order, so results are reproducible.
MeanCi mean_ci(std::span<const double> values);

/// ||estimate - truth||_F^2.
double mse_frobenius(const Matrix& estimate, const Matrix& truth);

/// Mean Frobenius loss and mean coefficient per (n, method). Each (n, trial)
/// draws fresh samples from the stream derived from (seed, n-index, trial).
ExperimentResult run_mse_experiment(const ExperimentConfig& cfg);

/// Mean Capon SINR per (n, method). Method::Oracle is the clairvoyant
/// beamformer built from the true covariance. Trials whose estimated
/// covariance is singular are excluded; more than kMaxExcludedFraction of
/// them fails the run.
ExperimentResult run_sinr_experiment(const ExperimentConfig& cfg);

}  // namespace shrinkcov
