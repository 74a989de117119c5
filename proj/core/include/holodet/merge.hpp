#pragma once

#include <string_view>
#include <vector>

#include "holodet/assignment.hpp"
#include "holodet/detection.hpp"
#include "holodet/pyramid.hpp"

namespace holodet {

/// Tilings of every plan layer; `tilings[m-1]` is layer m.
using PyramidTiling = std::vector<std::vector<TileWindow>>;

PyramidTiling tile_pyramid(const PyramidPlan& plan, int overlap);

/// Maps window-frame detections to the original frame through their
/// (layer, window) provenance. Throws Error on unknown provenance.
std::vector<Detection> remap_to_original(const std::vector<Detection>& dets,
                                         const PyramidTiling& tilings);

/// Keeps a detection from layer m only if its longer side lies in
/// [min_m, max_m).
std::vector<Detection> scale_filter(const std::vector<Detection>& dets,
                                    const LayerThresholds& thresholds);

enum class MergeMode {
  kCrossLayerNms,  // class-wise NMS over all layers and windows together
  kPerLayerNms,    // NMS inside each layer only; scale bands separate layers
};

MergeMode parse_merge_mode(std::string_view text);
std::string_view to_string(MergeMode mode);

/// Class-wise rotated NMS. The result is ordered by descending score, ties
/// by input index.
std::vector<Detection> global_merge(const std::vector<Detection>& dets, double iou_threshold,
                                    MergeMode mode = MergeMode::kCrossLayerNms);

}  // namespace holodet
