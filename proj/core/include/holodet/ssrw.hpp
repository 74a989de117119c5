#pragma once

#include <span>
#include <vector>

#include "holodet/geometry.hpp"

namespace holodet {

// Shape-sensitive regression weighting for positive samples.
//
// For a positive sample linked to ground truth (w, h), the center offset is
// projected onto the box axes (w', h'), turned into relative offsets
// r_w = 2w'/w and r_h = 2h'/h, and measured as Q = ln(r + 1) + 1. The
// regression weight is mu * Q_w * Q_h * r, where r is the box's aspect
// ratio normalized over the mini-batch.

struct SampleWeightRecord {
  Point sample;
  OrientedBox gt;
  double delta_d = 0.0;
  double w_proj = 0.0;
  double h_proj = 0.0;
  double r_w = 0.0;
  double r_h = 0.0;
  double q_w = 1.0;
  double q_h = 1.0;
  double r = 1.0;
  double mu = 1.0;
  double w_reg = 1.0;
};

struct AxisOffsets {
  double along_w = 0.0;
  double along_h = 0.0;
};

/// Absolute projections of (sample - center) onto the box's w and h axes.
AxisOffsets project_offsets(const OrientedBox& gt, Point sample);

/// r_i = (w_i / h_i) / max_j (w_j / h_j). Throws Error on an empty batch.
std::vector<double> normalize_aspect(std::span<const OrientedBox> batch);

double offset_factor(double relative_offset);

/// Throws Error unless mu > 0 and r in (0, 1].
SampleWeightRecord regression_weight(const OrientedBox& gt, Point sample, double r, double mu = 1.0);

}  // namespace holodet
