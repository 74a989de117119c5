#pragma once

#include <random>
#include <vector>

#include "holodet/eval.hpp"
#include "holodet/synth.hpp"

namespace holodet::testing {

/// Small multi-image, two-class evaluation set with jittered true positives,
/// misses, duplicates and injected false positives.
inline std::vector<EvalImage> eval_dataset(std::uint64_t seed, int images = 4, double fp_rate = 0.3) {
  std::vector<EvalImage> out;
  for (int i = 0; i < images; ++i) {
    SceneSpec scene;
    scene.height = 3072;
    scene.width = 3072;
    scene.per_bin = {14, 14, 10, 4};
    scene.seed = mix_seed(seed, static_cast<std::uint64_t>(2 * i));
    EvalImage img;
    img.gts = generate_scene(scene);
    for (std::size_t g = 0; g < img.gts.size(); g += 3) img.gts[g].label = "ship";

    PerturbSpec p;
    p.center_sigma = 1.5;
    p.size_sigma = 0.08;
    p.angle_sigma = 0.04;
    p.miss_rate = 0.1;
    p.fp_rate = fp_rate;
    p.seed = mix_seed(seed, static_cast<std::uint64_t>(2 * i + 1));
    img.dets = perturb_detector(img.gts, p, {0, 0, 3072, 3072});

    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = img.dets.size();
    for (std::size_t d = 0; d < n; d += 5) {
      Detection dup = img.dets[d];
      dup.box.cx += 2.0 * (unit(rng) - 0.5);
      dup.score *= 0.9 * unit(rng);
      img.dets.push_back(dup);
    }
    out.push_back(std::move(img));
  }
  return out;
}

}  // namespace holodet::testing
