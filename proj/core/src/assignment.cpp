#include "holodet/assignment.hpp"

#include <cmath>

namespace holodet {

double LayerThresholds::min_for(int m) const { return min_base * std::ldexp(1.0, m - 1); }

LayerAssignment assign_to_layers(const std::vector<Annotation>& labels, const PyramidPlan& plan,
                                 const LayerThresholds& thresholds) {
  LayerAssignment out;
  for (int m = 1; m <= plan.layer_count(); ++m) out.layers.push_back({m, {}});

  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double length = labels[i].box.longer_side();
    bool placed = false;
    for (LayerGroup& group : out.layers) {
      if (!thresholds.admits(group.layer, length)) continue;
      Annotation projected = labels[i];
      projected.box = project_box(labels[i].box, plan, group.layer);
      group.labels.push_back({i, labels[i], std::move(projected)});
      placed = true;
    }
    if (!placed) {
      const auto reason = length >= thresholds.max_length ? DroppedLabel::Reason::kTooLong
                                                          : DroppedLabel::Reason::kTooShort;
      out.dropped.push_back({i, length, reason});
    }
  }
  return out;
}

WindowAssignment assign_to_windows(const LayerGroup& group, const std::vector<TileWindow>& windows) {
  WindowAssignment out;
  out.per_window.resize(windows.size());
  for (const AssignedLabel& label : group.labels) {
    bool attached = false;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      if (!windows[w].contains(label.projected.box.center())) continue;
      Annotation local = label.projected;
      local.box = box_to_window(local.box, windows[w]);
      out.per_window[w].push_back({label.source, std::move(local)});
      attached = true;
    }
    if (!attached) out.unattached.push_back(label.source);
  }
  return out;
}

}  // namespace holodet
