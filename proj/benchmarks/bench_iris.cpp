#include <benchmark/benchmark.h>

#include "irislab/iris_core.hpp"
#include "irislab/iris_prc.hpp"
#include "irislab/iris_sim.hpp"
#include "irislab/smooth_system.hpp"

using namespace irislab;

static void BM_FindRoots(benchmark::State& state) {
  const IrisParams p = IrisParams::make(2.0, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(find_roots(p));
}
BENCHMARK(BM_FindRoots);

static void BM_PrcCurve(benchmark::State& state) {
  const IrisParams p = IrisParams::make(2.0, 0.2);
  const IrisCycle c = require_stable_cycle(p);
  for (auto _ : state) benchmark::DoNotOptimize(prc_curve(static_cast<std::size_t>(state.range(0)), c, p));
}
BENCHMARK(BM_PrcCurve)->Arg(256)->Arg(4096);

static void BM_AsymptoticPhase(benchmark::State& state) {
  const IrisParams p = IrisParams::make(2.0, 0.2);
  const IrisCycle c = require_stable_cycle(p);
  for (auto _ : state) benchmark::DoNotOptimize(asymptotic_phase(Vec2{-0.7, -1.3}, p, c));
}
BENCHMARK(BM_AsymptoticPhase);

static void BM_IsochronField(benchmark::State& state) {
  const IrisParams p = IrisParams::make(2.0, 0.2);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(isochron_field(n, p, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}
BENCHMARK(BM_IsochronField)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_SmoothIntegrate(benchmark::State& state) {
  const smooth::SmoothParams p{7.0 / 30.0, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(smooth::integrate({3.9, 3.14159}, 20.0, p));
}
BENCHMARK(BM_SmoothIntegrate)->Unit(benchmark::kMillisecond);

static void BM_SmoothPrcPoint(benchmark::State& state) {
  const smooth::SmoothCycle c = smooth::find_cycle({7.0 / 30.0, 0.3});
  for (auto _ : state) benchmark::DoNotOptimize(smooth::numeric_iprc_smooth({1, 0}, 0.5, c));
}
BENCHMARK(BM_SmoothPrcPoint)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
