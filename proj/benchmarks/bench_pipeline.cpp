#include <benchmark/benchmark.h>

#include "holodet/pipeline.hpp"
#include "holodet/pyramid.hpp"

using namespace holodet;

namespace {

void BM_PlanPyramid(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(plan_pyramid(16384, 16384, 2.0, 1024, 1024));
}
BENCHMARK(BM_PlanPyramid);

void BM_Pipeline(benchmark::State& state) {
  PipelineConfig config;
  config.seed = 3;
  config.jitter_center = 0.5;
  config.jitter_size = 0.02;
  config.jitter_angle = 0.01;
  config.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(config));
}
BENCHMARK(BM_Pipeline)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
