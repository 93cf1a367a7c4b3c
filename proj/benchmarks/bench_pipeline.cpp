#include <benchmark/benchmark.h>

#include <numeric>
#include <random>
#include <sstream>

#include "tensorrank/features.hpp"
#include "tensorrank/ingest.hpp"
#include "tensorrank/mcda.hpp"
#include "tensorrank/predict.hpp"

using namespace tensorrank;

namespace {

DecisionTensor panel(std::size_t n, std::size_t m, std::size_t len) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> nd(0.0, 1.0);
  Labels alts, crits;
  for (std::size_t i = 0; i < n; ++i) alts.push_back("alt" + std::to_string(i));
  for (std::size_t j = 0; j < m; ++j) crits.push_back("crit" + std::to_string(j));
  std::vector<int> times(len);
  std::iota(times.begin(), times.end(), 1980);
  Tensor3 v(n, m, len);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double x = 10.0;
      for (std::size_t t = 0; t < len; ++t) v(i, j, t) = x = 10.0 + 0.7 * (x - 10.0) + nd(rng);
    }
  return DecisionTensor(alts, crits, times, v);
}

void BM_PredictFiber(benchmark::State& state) {
  const auto p = panel(1, 1, static_cast<std::size_t>(state.range(0)));
  FilterConfig cfg;
  cfg.forgetting_factor = 0.95;
  for (auto _ : state) benchmark::DoNotOptimize(predict_fiber(p.fiber(0, 0), 1, cfg).value);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PredictFiber)->Arg(33)->Arg(200)->Arg(2000);

void BM_PredictTensor(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = panel(n, 3, 33);
  PredictConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(predict_tensor(p, 6, cfg));
}
BENCHMARK(BM_PredictTensor)->Arg(5)->Arg(50)->Arg(500);

void BM_ExtractFeatures(benchmark::State& state) {
  const auto p = panel(static_cast<std::size_t>(state.range(0)), 3, 6);
  const auto set = FeatureSet::standard();
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(p, set));
}
BENCHMARK(BM_ExtractFeatures)->Arg(5)->Arg(500);

void BM_PrometheeTensor(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = extract_features(panel(n, 3, 6), FeatureSet::standard());
  const auto dirs = derive_directions(f.criteria(),
                                      {Direction::Maximize, Direction::Minimize, Direction::Minimize},
                                      FeatureSet::standard());
  const auto w = WeightScheme::uniform(3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(promethee_tensor(f, dirs, w));
}
BENCHMARK(BM_PrometheeTensor)->Arg(5)->Arg(50)->Arg(200);

void BM_TopsisTensor(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = extract_features(panel(n, 3, 6), FeatureSet::standard());
  const auto dirs = derive_directions(f.criteria(),
                                      {Direction::Maximize, Direction::Minimize, Direction::Minimize},
                                      FeatureSet::standard());
  const auto w = WeightScheme::uniform(3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(topsis_tensor(f, dirs, w));
}
BENCHMARK(BM_TopsisTensor)->Arg(5)->Arg(200);

void BM_ParseTimeseriesCsv(benchmark::State& state) {
  const auto text = emit_tensor(panel(static_cast<std::size_t>(state.range(0)), 3, 39), Format::Csv);
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(parse_timeseries_csv(in));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseTimeseriesCsv)->Arg(5)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
