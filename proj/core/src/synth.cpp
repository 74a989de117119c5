#include "holodet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "holodet/error.hpp"

namespace holodet {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

std::vector<Annotation> generate_scene(const SceneSpec& spec) {
  if (spec.height < 1 || spec.width < 1) throw ConfigError("scene size must be positive");
  if (spec.per_bin.size() != spec.bins.bins.size()) {
    throw ConfigError("scene needs one instance count per length bin");
  }
  if (!(spec.aspect_min >= 1.0) || spec.aspect_max < spec.aspect_min) {
    throw ConfigError("aspect range must satisfy 1 <= min <= max");
  }
  if (!(spec.min_short_side > 0.0)) throw ConfigError("min_short_side must be positive");

  Rng rng(spec.seed);
  std::vector<Annotation> out;
  for (std::size_t b = 0; b < spec.bins.bins.size(); ++b) {
    const LengthBin& bin = spec.bins.bins[b];
    const double lo = std::max(bin.lo, spec.min_length);
    const double hi = std::min({bin.hi, spec.max_length, std::hypot(double(spec.width), double(spec.height))});
    if (spec.per_bin[b] > 0 && !(hi > lo)) {
      throw ConfigError("length bin '" + bin.name + "' is empty under the length floor and cap");
    }
    for (int k = 0; k < spec.per_bin[b]; ++k) {
      bool placed = false;
      for (int attempt = 0; attempt < spec.max_attempts && !placed; ++attempt) {
        // uniform_real_distribution is half-open; flip it so the draw lands in (lo, hi].
        const double length = hi - uniform(rng, 0.0, hi - lo);
        const double aspect_cap = std::min(spec.aspect_max, length / spec.min_short_side);
        const double aspect = aspect_cap < spec.aspect_min ? std::max(1.0, aspect_cap)
                                                           : uniform(rng, spec.aspect_min, aspect_cap);
        const double theta = uniform(rng, -kPi / 2.0, kPi / 2.0);
        const double short_side = length / aspect;
        const double c = std::abs(std::cos(theta));
        const double s = std::abs(std::sin(theta));
        const double half_x = (length * c + short_side * s) / 2.0;
        const double half_y = (length * s + short_side * c) / 2.0;
        if (2.0 * half_x >= spec.width || 2.0 * half_y >= spec.height) continue;
        const double cx = uniform(rng, half_x, spec.width - half_x);
        const double cy = uniform(rng, half_y, spec.height - half_y);
        const OrientedBox box = canonicalize(cx, cy, length, short_side, theta);
        const bool crowded = std::any_of(out.begin(), out.end(), [&](const Annotation& a) {
          return rotated_iou(a.box, box) > spec.max_pairwise_iou;
        });
        if (crowded) continue;
        out.push_back({box, spec.label, 0});
        placed = true;
      }
      if (!placed) {
        throw Error("generate_scene: could not place instance " + std::to_string(k) + " of bin '" +
                    bin.name + "' after " + std::to_string(spec.max_attempts) + " attempts");
      }
    }
  }
  return out;
}

std::vector<Detection> perturb_detector(const std::vector<Annotation>& gts, const PerturbSpec& spec,
                                        const AxisBox& bounds) {
  if (!(spec.miss_rate >= 0.0 && spec.miss_rate < 1.0) || !(spec.fp_rate >= 0.0 && spec.fp_rate < 1.0)) {
    throw ConfigError("miss and false-positive rates must lie in [0, 1)");
  }
  Rng rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Detection> out;
  for (const Annotation& gt : gts) {
    const bool missed = uniform(rng, 0.0, 1.0) < spec.miss_rate;
    const double dx = spec.center_sigma * normal(rng);
    const double dy = spec.center_sigma * normal(rng);
    const double sw = 1.0 + spec.size_sigma * normal(rng);
    const double sh = 1.0 + spec.size_sigma * normal(rng);
    const double dt = spec.angle_sigma * normal(rng);
    if (!missed) {
      const OrientedBox& g = gt.box;
      const OrientedBox jittered = canonicalize(g.cx + dx, g.cy + dy, g.w * std::max(sw, 1e-3),
                                                g.h * std::max(sh, 1e-3), g.theta + dt);
      Detection d;
      d.box = jittered;
      d.score = rotated_iou(jittered, g);
      d.label = gt.label;
      out.push_back(std::move(d));
    }
    if (uniform(rng, 0.0, 1.0) < spec.fp_rate) {
      Detection fp;
      fp.box = canonicalize(uniform(rng, bounds.xmin, bounds.xmax), uniform(rng, bounds.ymin, bounds.ymax),
                            gt.box.w, gt.box.h, uniform(rng, -kPi / 2.0, kPi / 2.0));
      fp.score = uniform(rng, 0.0, 0.5);
      fp.label = gt.label;
      out.push_back(std::move(fp));
    }
  }
  return out;
}

}  // namespace holodet
