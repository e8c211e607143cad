#include <benchmark/benchmark.h>

#include "rankone/metrics.hpp"
#include "rankone/transforms.hpp"

using namespace rankone;

namespace {

// Arguments are (d, n).
void space_args(benchmark::internal::Benchmark* b) {
  for (auto [d, n] : {std::pair{1, 4}, {2, 2}, {4, 1}, {4, 2}, {8, 1}}) b->Args({d, n});
}

ModuleSpec space(const benchmark::State& state) {
  return make_module(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
}

void BM_Iwasawa(benchmark::State& state) {
  const ModuleSpec spec = space(state);
  Rng rng(1);
  const Mat g = random_glwc(spec, rng);
  for (auto _ : state) benchmark::DoNotOptimize(iwasawa(spec, g));
}
BENCHMARK(BM_Iwasawa)->Apply(space_args);

void BM_Cartan(benchmark::State& state) {
  const ModuleSpec spec = space(state);
  Rng rng(2);
  const Mat g = random_glwc(spec, rng);
  for (auto _ : state) benchmark::DoNotOptimize(cartan(spec, g));
}
BENCHMARK(BM_Cartan)->Apply(space_args);

void BM_ApplyWord(benchmark::State& state) {
  const ModuleSpec spec = space(state);
  Rng rng(3);
  const TransformWord word = random_collineation_word(spec, rng);
  const CPWPoint p = random_point(spec, rng, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(apply_word(spec, word, p));
}
BENCHMARK(BM_ApplyWord)->Apply(space_args);

void BM_Distance(benchmark::State& state) {
  const ModuleSpec spec = space(state);
  Rng rng(4);
  const CPWPoint p = random_point(spec, rng, 0.0), q = random_point(spec, rng, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(distance(spec, Model::compact, p, q));
}
BENCHMARK(BM_Distance)->Apply(space_args);

void BM_FactorCollineation(benchmark::State& state) {
  const ModuleSpec spec = space(state);
  Rng rng(5);
  const TransformWord word = random_collineation_word(spec, rng);
  for (auto _ : state) benchmark::DoNotOptimize(factor_collineation(spec, word, 20));
}
BENCHMARK(BM_FactorCollineation)->Apply(space_args)->Unit(benchmark::kMillisecond);

void BM_VolumeQuadrature(benchmark::State& state) {
  const ModuleSpec spec = space(state);
  for (auto _ : state) benchmark::DoNotOptimize(volume_quadrature(spec));
}
BENCHMARK(BM_VolumeQuadrature)->Apply(space_args);

}  // namespace

BENCHMARK_MAIN();
