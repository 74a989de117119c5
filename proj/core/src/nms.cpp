#include <algorithm>
#include <cmath>
#include <numeric>

#include "holodet/detection.hpp"
#include "holodet/error.hpp"

namespace holodet {

std::vector<std::size_t> score_order(const std::vector<Detection>& dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
  return order;
}

std::vector<std::size_t> rotated_nms_indices(const std::vector<Detection>& dets,
                                             double iou_threshold) {
  for (const Detection& d : dets) {
    if (!std::isfinite(d.score)) throw Error("rotated_nms: non-finite score");
  }
  std::vector<std::size_t> kept;
  for (std::size_t idx : score_order(dets)) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return rotated_iou(dets[k].box, dets[idx].box) > iou_threshold;
    });
    if (!suppressed) kept.push_back(idx);
  }
  return kept;
}

std::vector<Detection> rotated_nms(const std::vector<Detection>& dets, double iou_threshold) {
  std::vector<Detection> out;
  for (std::size_t idx : rotated_nms_indices(dets, iou_threshold)) out.push_back(dets[idx]);
  return out;
}

}  // namespace holodet
