#include <benchmark/benchmark.h>

#include "fraudkit/baselines.hpp"
#include "fraudkit/embedding.hpp"
#include "fraudkit/mlp.hpp"
#include "fraudkit/resampling.hpp"
#include "fraudkit/rng.hpp"
#include "fraudkit/synthetic.hpp"

using namespace fraudkit;

namespace {

Dataset make_data(std::size_t n, double rate) {
  SyntheticConfig cfg;
  cfg.n_samples = n;
  cfg.fraud_rate = rate;
  cfg.seed = 1;
  return synthesize(cfg);
}

Matrix random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(n, d);
  for (double& v : m.values()) v = rng.normal();
  return m;
}

}  // namespace

static void BM_Smote(benchmark::State& state) {
  const auto ds = make_data(static_cast<std::size_t>(state.range(0)), 0.01);
  SmoteConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(smote(ds, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ds.count(0) - ds.count(1)));
}
BENCHMARK(BM_Smote)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_KnnPredict(benchmark::State& state) {
  const auto train = make_data(static_cast<std::size_t>(state.range(0)), 0.5);
  const auto queries = random_points(200, train.dims(), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(knn_predict_proba(train, queries, 5));
  }
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_KnnPredict)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_TsneGradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto points = random_points(n, 30, 3);
  const auto p = symmetrize(conditional_affinities(points, 30.0));
  const auto y = random_points(n, 2, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tsne_gradient(p, y));
  }
}
BENCHMARK(BM_TsneGradient)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_MlpEpoch(benchmark::State& state) {
  const auto train = make_data(static_cast<std::size_t>(state.range(0)), 0.5);
  const std::vector<std::size_t> hidden{32, 16};
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_mlp(train, hidden, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(train.size()));
}
BENCHMARK(BM_MlpEpoch)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
