#include <benchmark/benchmark.h>

#include "oddsmith/experiment.hpp"
#include "oddsmith/synthetic.hpp"

using namespace oddsmith;

namespace {

// A two-season, 20-team simulated league (1520 rows), prepared once.
const Dataset& league() {
  static const Dataset data = [] {
    LeagueOptions options;
    options.seed = 99;
    return encode(impute(prune_columns(synthetic_league_records(options))));
  }();
  return data;
}

const Dataset& scaled_league() {
  static const Dataset data = normalize(league()).first;
  return data;
}

void BM_ForestFit(benchmark::State& state) {
  const RandomForestParams hp{static_cast<int>(state.range(0)), 12, 1, 0, true, 1};
  for (auto _ : state) benchmark::DoNotOptimize(train(hp, league()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForestFit)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_BoostFit(benchmark::State& state) {
  const GradientBoostParams hp{static_cast<int>(state.range(0)), 3, 0.1, 1.0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(train(hp, league()));
}
BENCHMARK(BM_BoostFit)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SvmFit(benchmark::State& state) {
  const SvmParams hp{1.0, static_cast<int>(state.range(0)), 0.1, 1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(train(hp, scaled_league()));
}
BENCHMARK(BM_SvmFit)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_KnnPredict(benchmark::State& state) {
  const auto model = train(KnnParams{static_cast<int>(state.range(0))}, scaled_league());
  const auto& data = scaled_league();
  std::size_t row = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.predict_proba(data.X.row(row)));
    row = (row + 1) % data.rows();
  }
}
BENCHMARK(BM_KnnPredict)->Arg(5)->Arg(25);

void BM_ExperimentCell(benchmark::State& state) {
  ExperimentConfig config;
  config.data = "in-memory";
  const auto tt = split(league(), SplitSpec::two_seasons());
  const auto subset = all_features(tt.train);
  const auto kind = static_cast<ModelKind>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_cell(config, kind, SplitSpec::two_seasons(), subset, tt));
  }
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_ExperimentCell)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_CorrelationSelect(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(select_by_correlation(league(), 10));
}
BENCHMARK(BM_CorrelationSelect)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
