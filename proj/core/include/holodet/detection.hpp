#pragma once

#include <string>
#include <vector>

#include "holodet/geometry.hpp"

namespace holodet {

/// Coordinate frame a box is expressed in.
enum class Frame { kWindow, kLayer, kOriginal };

/// One annotated instance.
struct Annotation {
  OrientedBox box;
  std::string label = "bridge";
  int difficulty = 0;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Scored box with provenance. `layer` is the 1-based pyramid layer and
/// `window` the index into that layer's tiling; -1 means the detection was
/// not produced by a tiled window.
struct Detection {
  OrientedBox box;
  double score = 0.0;
  std::string label = "bridge";
  int layer = 1;
  int window = -1;
  Frame frame = Frame::kOriginal;

  friend bool operator==(const Detection&, const Detection&) = default;
};

/// Greedy rotated non-maximum suppression. Candidates are visited in
/// descending score with ties going to the lower input index; a candidate is
/// dropped when its IoU with an already kept box exceeds `iou_threshold`.
/// The result is in visiting order.
std::vector<Detection> rotated_nms(const std::vector<Detection>& dets, double iou_threshold);

/// Same as rotated_nms but returns the kept input indices.
std::vector<std::size_t> rotated_nms_indices(const std::vector<Detection>& dets,
                                             double iou_threshold);

/// Stable descending-score order of `dets`, ties by input index.
std::vector<std::size_t> score_order(const std::vector<Detection>& dets);

}  // namespace holodet
