#include <benchmark/benchmark.h>

#include "holodet/eval.hpp"
#include "holodet/synth.hpp"

using namespace holodet;

namespace {

std::vector<EvalImage> dataset(int images) {
  std::vector<EvalImage> out;
  for (int i = 0; i < images; ++i) {
    SceneSpec scene;
    scene.per_bin = {20, 20, 10, 2};
    scene.seed = mix_seed(7, static_cast<std::uint64_t>(2 * i));
    EvalImage img;
    img.gts = generate_scene(scene);
    PerturbSpec p;
    p.center_sigma = 1.0;
    p.size_sigma = 0.05;
    p.angle_sigma = 0.02;
    p.miss_rate = 0.1;
    p.fp_rate = 0.3;
    p.seed = mix_seed(7, static_cast<std::uint64_t>(2 * i + 1));
    img.dets = perturb_detector(img.gts, p, {0, 0, 4096, 4096});
    out.push_back(std::move(img));
  }
  return out;
}

void BM_Evaluate(benchmark::State& state) {
  const auto images = dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(images));
}
BENCHMARK(BM_Evaluate)->Arg(1)->Arg(8);

}  // namespace
