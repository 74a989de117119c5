#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "holodet/detection.hpp"
#include "holodet/geometry.hpp"

using namespace holodet;

namespace {

OrientedBox random_box(std::mt19937_64& rng, double span) {
  std::uniform_real_distribution<double> pos(0.0, span);
  std::uniform_real_distribution<double> side(4.0, 80.0);
  std::uniform_real_distribution<double> angle(-1.5, 1.5);
  return canonicalize({pos(rng), pos(rng), side(rng), side(rng), angle(rng)});
}

void BM_RotatedIou(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<std::pair<OrientedBox, OrientedBox>> pairs;
  for (int i = 0; i < 1024; ++i) pairs.emplace_back(random_box(rng, 60), random_box(rng, 60));
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[k++ & 1023];
    benchmark::DoNotOptimize(rotated_iou(a, b));
  }
}
BENCHMARK(BM_RotatedIou);

void BM_RotatedNms(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::vector<Detection> dets;
  for (int i = 0; i < state.range(0); ++i) {
    Detection d;
    d.box = random_box(rng, 2000);
    d.score = score(rng);
    d.label = "bridge";
    dets.push_back(d);
  }
  for (auto _ : state) benchmark::DoNotOptimize(rotated_nms(dets, 0.5));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RotatedNms)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

}  // namespace
