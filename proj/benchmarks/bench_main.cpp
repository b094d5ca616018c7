#include <benchmark/benchmark.h>

#include "shrinkcov/shrinkcov.hpp"

namespace sc = shrinkcov;
using sc::Index;
using sc::Method;

namespace {

sc::SampleSet draw(Index p, Index n) {
  const sc::GaussianSampler sampler(sc::ar1_cov(p, 0.5), 7);
  return sampler.sample(n);
}

void BM_SampleCovariance(benchmark::State& state) {
  const auto x = draw(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(sc::sample_covariance(x));
}
BENCHMARK(BM_SampleCovariance)->Args({100, 20})->Args({100, 100})->Args({400, 50});

void BM_Statistics(benchmark::State& state) {
  const auto s = sc::sample_covariance(draw(state.range(0), state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(sc::statistics(s));
}
BENCHMARK(BM_Statistics)->Args({100, 20})->Args({400, 50});

void BM_Estimate(benchmark::State& state) {
  const Index p = state.range(0);
  const auto x = draw(p, state.range(1));
  const auto method = static_cast<Method>(state.range(2));
  sc::EstimateOptions opts;
  if (method == Method::Oracle) opts.true_sigma = sc::ar1_cov(p, 0.5);
  state.SetLabel(std::string(sc::to_string(method)));
  for (auto _ : state) benchmark::DoNotOptimize(sc::estimate(x, method, opts));
}
BENCHMARK(BM_Estimate)
    ->ArgsProduct({{100}, {20},
                   {static_cast<long>(Method::SampleOnly), static_cast<long>(Method::Oracle),
                    static_cast<long>(Method::LW), static_cast<long>(Method::RBLW),
                    static_cast<long>(Method::OAS)}});

void BM_OasIterate(benchmark::State& state) {
  const auto st = sc::statistics(sc::sample_covariance(draw(100, 20)));
  for (auto _ : state) benchmark::DoNotOptimize(sc::oas_iterate(st, 0.5, 10000, 1e-12));
}
BENCHMARK(BM_OasIterate);

void BM_CaponWeights(benchmark::State& state) {
  const auto scenario = sc::UlaScenario::reference(state.range(0));
  const sc::CMatrix sigma = sc::true_cov(scenario);
  const sc::CVector a = sc::array_response(scenario.p, scenario.signal().omega);
  for (auto _ : state) benchmark::DoNotOptimize(sc::capon_weights(sigma, a));
}
BENCHMARK(BM_CaponWeights)->Arg(10)->Arg(64);

void BM_ComplexEstimate(benchmark::State& state) {
  const auto scenario = sc::UlaScenario::reference();
  sc::NormalStream rng(11);
  const auto x = sc::draw_snapshots(scenario, state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(sc::estimate_complex(x, Method::OAS));
}
BENCHMARK(BM_ComplexEstimate)->Arg(10)->Arg(60);

void BM_SinrExperiment(benchmark::State& state) {
  sc::ExperimentConfig cfg{.model = sc::UlaScenario::reference()};
  cfg.n_grid = {10, 30};
  cfg.trials = 200;
  cfg.seed = 1;
  cfg.methods = {Method::OAS, Method::LW, Method::RBLW};
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sc::run_sinr_experiment(cfg));
}
BENCHMARK(BM_SinrExperiment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
