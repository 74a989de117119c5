#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "holodet/detection.hpp"
#include "holodet/eval.hpp"

namespace holodet {

/// splitmix64 finalizer; derives independent stream seeds from one run seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

using Rng = std::mt19937_64;

struct SceneSpec {
  int height = 4096;
  int width = 4096;
  LengthBins bins = LengthBins::standard();
  std::vector<int> per_bin = {4, 4, 4, 4};  // instances drawn from each length bin
  double min_length = 12.0;                 // longer-side floor
  double max_length = 16384.0;              // longer-side cap on top of the bins
  double aspect_min = 2.0;
  double aspect_max = 50.0;
  double min_short_side = 2.0;
  double max_pairwise_iou = 0.1;
  int max_attempts = 10000;  // per instance
  std::string label = "bridge";
  std::uint64_t seed = 0;
};

/// Boxes lie fully inside the image, lengths are drawn uniformly inside
/// each bin (clipped to the floor and cap), orientations uniformly. Throws
/// Error when an instance cannot be placed within the attempt budget.
std::vector<Annotation> generate_scene(const SceneSpec& spec);

struct PerturbSpec {
  double center_sigma = 0.0;  // px
  double size_sigma = 0.0;    // relative
  double angle_sigma = 0.0;   // rad
  double miss_rate = 0.0;
  double fp_rate = 0.0;
  std::uint64_t seed = 0;
};

/// Detector stand-in. Each gt is dropped with probability miss_rate or
/// emitted with Gaussian jitter and score equal to its IoU with the gt.
/// Each gt also spawns, with probability fp_rate, a false positive placed
/// uniformly in `bounds` with a gt-like shape and score below 0.5.
std::vector<Detection> perturb_detector(const std::vector<Annotation>& gts, const PerturbSpec& spec,
                                        const AxisBox& bounds);

}  // namespace holodet
