#include <benchmark/benchmark.h>

#include "assocfam/catalog.hpp"
#include "assocfam/family.hpp"

using namespace assocfam;

static void BM_Extract(benchmark::State& state) {
  const Immersion imm = make_surface("graph", {{"space", "E(1,0.4)"}});
  for (auto _ : state) benchmark::DoNotOptimize(extract(imm, {0.1, 0.2}));
}
BENCHMARK(BM_Extract);

static void BM_ExtractWarped(benchmark::State& state) {
  const Immersion imm = make_surface("graph", {{"space", "W(1,1,1,0,a=cosh[1,0],I=[-1,1])"}});
  for (auto _ : state) benchmark::DoNotOptimize(extract(imm, {0.1, 0.2}));
}
BENCHMARK(BM_ExtractWarped);

static void BM_ResidualGrid(benchmark::State& state) {
  const Immersion imm = make_surface("helicoid-product");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(residual_grid(imm, GridSpec{n, n, 0.05}, 1e-8));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ResidualGrid)->Arg(11)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

static void BM_FamilySweep(benchmark::State& state) {
  const Immersion imm = make_surface("helicoid-product");
  const std::vector<double> thetas{0.0, 0.4, 0.8, 1.2, 1.6};
  for (auto _ : state)
    benchmark::DoNotOptimize(verify_family(imm, FamilyLaw::canonical(), thetas, GridSpec{}, 1e-8));
}
BENCHMARK(BM_FamilySweep)->Unit(benchmark::kMillisecond);

static void BM_Classify(benchmark::State& state) {
  const Immersion imm = make_surface("nil3-vertical-plane");
  for (auto _ : state) benchmark::DoNotOptimize(classify(imm, GridSpec{}));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
