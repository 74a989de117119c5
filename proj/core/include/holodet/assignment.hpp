#pragma once

#include <cstddef>
#include <vector>

#include "holodet/detection.hpp"
#include "holodet/pyramid.hpp"

namespace holodet {

/// Per-layer length bands [min_m, max_m) in original pixels, with
/// min_m = min_base * 2^(m-1) and a shared max_m.
struct LayerThresholds {
  double min_base = 15.0;
  double max_length = 1448.0;

  double min_for(int m) const;
  double max_for(int /*m*/) const { return max_length; }
  bool admits(int m, double longer_side) const {
    return longer_side >= min_for(m) && longer_side < max_for(m);
  }
};

struct AssignedLabel {
  std::size_t source = 0;  // index into the input label list
  Annotation original;     // original frame
  Annotation projected;    // layer frame
};

struct LayerGroup {
  int layer = 1;
  std::vector<AssignedLabel> labels;
};

struct DroppedLabel {
  std::size_t source = 0;
  double longer_side = 0.0;
  enum class Reason { kTooShort, kTooLong } reason = Reason::kTooShort;
};

struct LayerAssignment {
  std::vector<LayerGroup> layers;  // one per plan layer, in order
  std::vector<DroppedLabel> dropped;
};

/// A label joins every layer whose band contains its longer side; labels
/// joining no layer are listed in `dropped`.
LayerAssignment assign_to_layers(const std::vector<Annotation>& labels, const PyramidPlan& plan,
                                 const LayerThresholds& thresholds);

struct WindowLabel {
  std::size_t source = 0;
  Annotation label;  // window frame
};

struct WindowAssignment {
  std::vector<std::vector<WindowLabel>> per_window;  // parallel to the window list
  std::vector<std::size_t> unattached;               // sources whose center hit no window
};

/// Attaches each layer-frame label to every window whose closed extent holds
/// its center, re-expressed in window coordinates.
WindowAssignment assign_to_windows(const LayerGroup& group, const std::vector<TileWindow>& windows);

}  // namespace holodet
