#include "holodet/ssrw.hpp"

#include <algorithm>
#include <cmath>

#include "holodet/error.hpp"

namespace holodet {

AxisOffsets project_offsets(const OrientedBox& gt, Point sample) {
  const Point d = sample - gt.center();
  const Point axis_w{std::cos(gt.theta), std::sin(gt.theta)};
  const Point axis_h{-axis_w.y, axis_w.x};
  return {std::abs(dot(d, axis_w)), std::abs(dot(d, axis_h))};
}

std::vector<double> normalize_aspect(std::span<const OrientedBox> batch) {
  if (batch.empty()) throw Error("normalize_aspect: empty batch");
  std::vector<double> out;
  out.reserve(batch.size());
  for (const OrientedBox& b : batch) out.push_back(b.w / b.h);
  const double peak = *std::max_element(out.begin(), out.end());
  for (double& r : out) r /= peak;
  return out;
}

double offset_factor(double relative_offset) { return std::log(relative_offset + 1.0) + 1.0; }

SampleWeightRecord regression_weight(const OrientedBox& gt, Point sample, double r, double mu) {
  if (!(mu > 0.0)) throw Error("regression_weight: mu must be positive");
  if (!(r > 0.0 && r <= 1.0)) throw Error("regression_weight: r must lie in (0, 1]");

  SampleWeightRecord rec;
  rec.sample = sample;
  rec.gt = gt;
  rec.delta_d = std::hypot(sample.x - gt.cx, sample.y - gt.cy);
  const AxisOffsets off = project_offsets(gt, sample);
  rec.w_proj = off.along_w;
  rec.h_proj = off.along_h;
  rec.r_w = 2.0 * rec.w_proj / gt.w;
  rec.r_h = 2.0 * rec.h_proj / gt.h;
  rec.q_w = offset_factor(rec.r_w);
  rec.q_h = offset_factor(rec.r_h);
  rec.r = r;
  rec.mu = mu;
  rec.w_reg = mu * rec.q_w * rec.q_h * r;
  return rec;
}

}  // namespace holodet
