#include "holodet/merge.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "holodet/error.hpp"

namespace holodet {

PyramidTiling tile_pyramid(const PyramidPlan& plan, int overlap) {
  PyramidTiling out;
  for (int m = 1; m <= plan.layer_count(); ++m) out.push_back(tile_layer(plan, m, overlap));
  return out;
}

std::vector<Detection> remap_to_original(const std::vector<Detection>& dets,
                                         const PyramidTiling& tilings) {
  std::vector<Detection> out;
  out.reserve(dets.size());
  for (const Detection& d : dets) {
    if (d.layer < 1 || d.layer > static_cast<int>(tilings.size())) {
      throw Error("remap: unknown layer " + std::to_string(d.layer));
    }
    const auto& windows = tilings[static_cast<std::size_t>(d.layer - 1)];
    if (d.window < 0 || d.window >= static_cast<int>(windows.size())) {
      throw Error("remap: unknown window " + std::to_string(d.window) + " on layer " +
                  std::to_string(d.layer));
    }
    const TileWindow& win = windows[static_cast<std::size_t>(d.window)];
    Detection r = d;
    const Point c = window_to_original(win, d.box.center());
    r.box = {c.x, c.y, d.box.w * win.scale, d.box.h * win.scale, d.box.theta};
    r.frame = Frame::kOriginal;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Detection> scale_filter(const std::vector<Detection>& dets,
                                    const LayerThresholds& thresholds) {
  std::vector<Detection> out;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(out), [&](const Detection& d) {
    return thresholds.admits(d.layer, d.box.longer_side());
  });
  return out;
}

MergeMode parse_merge_mode(std::string_view text) {
  if (text == "cross-layer") return MergeMode::kCrossLayerNms;
  if (text == "per-layer") return MergeMode::kPerLayerNms;
  throw ConfigError("unknown merge mode '" + std::string(text) + "' (cross-layer | per-layer)");
}

std::string_view to_string(MergeMode mode) {
  return mode == MergeMode::kCrossLayerNms ? "cross-layer" : "per-layer";
}

std::vector<Detection> global_merge(const std::vector<Detection>& dets, double iou_threshold,
                                    MergeMode mode) {
  // Group key: class, plus layer when layers are merged separately.
  std::map<std::pair<std::string, int>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const int layer = mode == MergeMode::kPerLayerNms ? dets[i].layer : 0;
    groups[{dets[i].label, layer}].push_back(i);
  }
  std::vector<std::size_t> kept;
  for (const auto& [key, members] : groups) {
    std::vector<Detection> subset;
    for (std::size_t i : members) subset.push_back(dets[i]);
    for (std::size_t k : rotated_nms_indices(subset, iou_threshold)) kept.push_back(members[k]);
  }
  std::sort(kept.begin(), kept.end());
  std::stable_sort(kept.begin(), kept.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
  std::vector<Detection> out;
  for (std::size_t i : kept) out.push_back(dets[i]);
  return out;
}

}  // namespace holodet
