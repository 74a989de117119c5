#include "holodet/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "holodet/error.hpp"

namespace holodet {

namespace {

bool same_ratio(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(a, b); }

CellRect intersect(const CellRect& a, const CellRect& b) {
  const int x0 = std::max(a.x0, b.x0);
  const int y0 = std::max(a.y0, b.y0);
  const int x1 = std::min(a.x0 + a.width, b.x0 + b.width);
  const int y1 = std::min(a.y0 + a.height, b.y0 + b.height);
  if (x1 <= x0 || y1 <= y0) return {x0, y0, 0, 0};
  return {x0, y0, x1 - x0, y1 - y0};
}

std::vector<const FeatureMap*> level_maps(const FeaturePyramid& pyramid, int layer, int level) {
  std::vector<const FeatureMap*> out;
  const LayerFeatures& lf = pyramid.layers.at(static_cast<std::size_t>(layer - 1));
  for (const WindowFeatures& wf : lf.windows) out.push_back(&wf.levels.at(static_cast<std::size_t>(level)));
  return out;
}

}  // namespace

std::pair<int, int> FeatureMap::cell_of(Point original) const {
  return {static_cast<int>(std::floor(original.x / effective_ratio)),
          static_cast<int>(std::floor(original.y / effective_ratio))};
}

const FeatureMap& FeaturePyramid::map(int layer, int level, std::size_t window) const {
  return layers.at(static_cast<std::size_t>(layer - 1))
      .windows.at(window)
      .levels.at(static_cast<std::size_t>(level));
}

CandidateSelection select_candidates(const FeaturePyramid& pyramid) {
  if (!same_ratio(pyramid.fpn_ratio, pyramid.sigma)) {
    throw ConfigError("feature fusion needs the FPN ratio (" + std::to_string(pyramid.fpn_ratio) +
                      ") to equal sigma (" + std::to_string(pyramid.sigma) + ")");
  }
  CandidateSelection out;
  const int n = static_cast<int>(pyramid.layers.size());
  for (int j = 1; j <= n; ++j) {
    for (int i = 0; i < pyramid.level_count; ++i) {
      if (j > 1 && j < n && i > 0 && i + 1 < pyramid.level_count) {
        const double ratio = std::pow(pyramid.sigma, j - 1) * pyramid.base_stride * std::ldexp(1.0, i);
        out.sets.push_back({{j - 1, i + 1}, {j, i}, {j + 1, i - 1}, ratio});
      } else {
        out.pass_through.push_back({j, i});
      }
    }
  }
  return out;
}

FeatureMap mosaic(const std::vector<const FeatureMap*>& maps, const CellRect& target) {
  if (maps.empty()) throw Error("mosaic: no input maps");
  FeatureMap out = *maps.front();
  out.extent = target;
  out.values.assign(static_cast<std::size_t>(out.channels) * target.width * target.height, 0.0);
  std::vector<int> counts(static_cast<std::size_t>(target.width) * target.height, 0);

  for (const FeatureMap* m : maps) {
    if (m->channels != out.channels || !same_ratio(m->effective_ratio, out.effective_ratio)) {
      throw Error("mosaic: maps do not share one lattice");
    }
    const CellRect common = intersect(m->extent, target);
    if (common.empty()) continue;
    for (int gy = common.y0; gy < common.y0 + common.height; ++gy) {
      for (int gx = common.x0; gx < common.x0 + common.width; ++gx) {
        const int ty = gy - target.y0;
        const int tx = gx - target.x0;
        ++counts[static_cast<std::size_t>(ty) * target.width + tx];
        for (int c = 0; c < out.channels; ++c) {
          out.at(c, ty, tx) += m->at(c, gy - m->extent.y0, gx - m->extent.x0);
        }
      }
    }
  }
  for (int y = 0; y < target.height; ++y) {
    for (int x = 0; x < target.width; ++x) {
      const int n = counts[static_cast<std::size_t>(y) * target.width + x];
      if (n <= 1) continue;
      for (int c = 0; c < out.channels; ++c) out.at(c, y, x) /= n;
    }
  }
  return out;
}

FeatureMap avg_pool2(const FeatureMap& in) {
  const CellRect& e = in.extent;
  if (e.x0 % 2 != 0 || e.y0 % 2 != 0 || e.width % 2 != 0 || e.height % 2 != 0) {
    throw Error("avg_pool2: extent is not aligned to the coarser lattice");
  }
  FeatureMap out = in;
  out.extent = {e.x0 / 2, e.y0 / 2, e.width / 2, e.height / 2};
  out.cell_size = in.cell_size * 2.0;
  out.effective_ratio = in.effective_ratio * 2.0;
  out.values.assign(static_cast<std::size_t>(in.channels) * out.extent.width * out.extent.height, 0.0);
  for (int c = 0; c < in.channels; ++c) {
    for (int y = 0; y < out.extent.height; ++y) {
      for (int x = 0; x < out.extent.width; ++x) {
        out.at(c, y, x) = 0.25 * (in.at(c, 2 * y, 2 * x) + in.at(c, 2 * y, 2 * x + 1) +
                                  in.at(c, 2 * y + 1, 2 * x) + in.at(c, 2 * y + 1, 2 * x + 1));
      }
    }
  }
  return out;
}

AlignedTriple align(const FeaturePyramid& pyramid, const CandidateSet& set, std::size_t mid_window) {
  AlignedTriple out;
  out.mid = pyramid.map(set.mid.layer, set.mid.level, mid_window);
  const CellRect& ext = out.mid.extent;

  // Upper: layer j-1 at level i sits on a lattice twice as fine as mid.
  const auto upper_maps = level_maps(pyramid, set.upper.layer, set.upper.level - 1);
  if (!same_ratio(upper_maps.front()->effective_ratio * 2.0, out.mid.effective_ratio)) {
    throw Error("align: upper member is not on a 2x finer lattice");
  }
  out.upper_source = {2 * ext.x0, 2 * ext.y0, 2 * ext.width, 2 * ext.height};
  out.upper = avg_pool2(mosaic(upper_maps, out.upper_source));
  out.upper.layer = set.upper.layer;
  out.upper.level = set.upper.level;

  const auto lower_maps = level_maps(pyramid, set.lower.layer, set.lower.level);
  if (!same_ratio(lower_maps.front()->effective_ratio, out.mid.effective_ratio)) {
    throw Error("align: lower member does not share mid's lattice");
  }
  out.lower = mosaic(lower_maps, ext);
  CellRect covered = lower_maps.front()->extent;
  for (const FeatureMap* m : lower_maps) {
    const int x1 = std::max(covered.x0 + covered.width, m->extent.x0 + m->extent.width);
    const int y1 = std::max(covered.y0 + covered.height, m->extent.y0 + m->extent.height);
    covered.x0 = std::min(covered.x0, m->extent.x0);
    covered.y0 = std::min(covered.y0, m->extent.y0);
    covered.width = x1 - covered.x0;
    covered.height = y1 - covered.y0;
  }
  out.lower_crop = intersect(covered, ext);
  return out;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

FeatureMap fuse(const AlignedTriple& t, const MixWeights& weights) {
  const CellRect& ext = t.mid.extent;
  for (const FeatureMap* m : {&t.upper, &t.lower}) {
    if (m->extent.width != ext.width || m->extent.height != ext.height) {
      throw Error("fuse: aligned members differ in shape");
    }
  }
  const int in_channels = t.upper.channels + t.mid.channels + t.lower.channels;
  if (weights.in_channels != in_channels || weights.out_channels < 1 ||
      weights.values.size() != static_cast<std::size_t>(weights.out_channels) * in_channels) {
    throw Error("fuse: weight matrix must be out x " + std::to_string(in_channels));
  }

  FeatureMap out = t.mid;
  out.channels = weights.out_channels;
  out.values.assign(static_cast<std::size_t>(out.channels) * ext.width * ext.height, 0.0);
  const FeatureMap* parts[] = {&t.upper, &t.mid, &t.lower};
  for (int y = 0; y < ext.height; ++y) {
    for (int x = 0; x < ext.width; ++x) {
      for (int o = 0; o < out.channels; ++o) {
        double acc = 0.0;
        int k = 0;
        for (const FeatureMap* part : parts) {
          for (int c = 0; c < part->channels; ++c, ++k) acc += weights.at(o, k) * part->at(c, y, x);
        }
        out.at(o, y, x) = sigmoid(acc);
      }
    }
  }
  return out;
}

FeaturePyramid apply_iff(const FeaturePyramid& pyramid, const MixWeights& weights) {
  if (weights.out_channels != pyramid.channels) {
    throw Error("apply_iff: fused features must keep the pyramid's channel count");
  }
  FeaturePyramid out = pyramid;
  for (const CandidateSet& set : select_candidates(pyramid).sets) {
    auto& windows = out.layers[static_cast<std::size_t>(set.mid.layer - 1)].windows;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      windows[w].levels[static_cast<std::size_t>(set.mid.level)] = fuse(align(pyramid, set, w), weights);
    }
  }
  return out;
}

FeaturePyramid build_synthetic_pyramid(const PyramidPlan& plan, int overlap,
                                       const SyntheticFeatureSpec& spec, const FeatureField& field) {
  if (spec.level_count < 1 || spec.base_stride < 1 || spec.channels < 1) {
    throw ConfigError("synthetic features need positive levels, stride and channels");
  }
  FeaturePyramid out;
  out.sigma = plan.sigma;
  out.base_stride = spec.base_stride;
  out.level_count = spec.level_count;
  out.channels = spec.channels;
  const int coarsest = spec.base_stride << (spec.level_count - 1);

  for (int m = 1; m <= plan.layer_count(); ++m) {
    LayerFeatures lf{m, {}};
    for (const TileWindow& win : tile_layer(plan, m, overlap)) {
      if (win.x0 % coarsest || win.y0 % coarsest || win.width % coarsest || win.height % coarsest) {
        throw ConfigError("window at layer " + std::to_string(m) + " origin (" + std::to_string(win.x0) +
                          ", " + std::to_string(win.y0) + ") is not aligned to the " +
                          std::to_string(coarsest) + "-pixel coarsest cell");
      }
      FeatureMap base;
      base.layer = m;
      base.level = 0;
      base.channels = spec.channels;
      base.cell_size = spec.base_stride;
      base.effective_ratio = win.scale * spec.base_stride;
      base.extent = {win.x0 / spec.base_stride, win.y0 / spec.base_stride, win.width / spec.base_stride,
                     win.height / spec.base_stride};
      base.values.resize(static_cast<std::size_t>(base.channels) * base.extent.width * base.extent.height);
      for (int c = 0; c < base.channels; ++c) {
        for (int y = 0; y < base.extent.height; ++y) {
          for (int x = 0; x < base.extent.width; ++x) {
            const Point centre{(base.extent.x0 + x + 0.5) * base.effective_ratio,
                               (base.extent.y0 + y + 0.5) * base.effective_ratio};
            base.at(c, y, x) = field(c, centre);
          }
        }
      }
      WindowFeatures wf{win, {std::move(base)}};
      for (int i = 1; i < spec.level_count; ++i) {
        FeatureMap next = avg_pool2(wf.levels.back());
        next.level = i;
        wf.levels.push_back(std::move(next));
      }
      lf.windows.push_back(std::move(wf));
    }
    out.layers.push_back(std::move(lf));
  }
  return out;
}

void stamp_point(FeaturePyramid& pyramid, Point original, double value) {
  for (LayerFeatures& lf : pyramid.layers) {
    for (WindowFeatures& wf : lf.windows) {
      for (FeatureMap& m : wf.levels) {
        const auto [gx, gy] = m.cell_of(original);
        const int x = gx - m.extent.x0;
        const int y = gy - m.extent.y0;
        if (x < 0 || y < 0 || x >= m.extent.width || y >= m.extent.height) continue;
        for (int c = 0; c < m.channels; ++c) m.at(c, y, x) = value;
      }
    }
  }
}

}  // namespace holodet
