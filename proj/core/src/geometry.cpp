#include "holodet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "holodet/error.hpp"

namespace holodet {

double wrap_half_turn(double theta) {
  if (theta >= -kPi / 2.0 && theta < kPi / 2.0) return theta;
  double t = theta - kPi * std::floor((theta + kPi / 2.0) / kPi);
  // floor() can land one period off when theta sits on a boundary.
  if (t >= kPi / 2.0) t -= kPi;
  if (t < -kPi / 2.0) t += kPi;
  return t;
}

OrientedBox canonicalize(double cx, double cy, double w, double h, double theta) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) || !std::isfinite(h) ||
      !std::isfinite(theta)) {
    throw InvalidBox("box parameters must be finite");
  }
  if (w <= 0.0 || h <= 0.0) {
    throw InvalidBox("box sides must be positive, got w=" + std::to_string(w) +
                     " h=" + std::to_string(h));
  }
  if (w < h) {
    std::swap(w, h);
    theta += kPi / 2.0;
  }
  return {cx, cy, w, h, wrap_half_turn(theta)};
}

OrientedBox canonicalize(const OrientedBox& raw) {
  return canonicalize(raw.cx, raw.cy, raw.w, raw.h, raw.theta);
}

Quad corners(const OrientedBox& box) {
  const double c = std::cos(box.theta);
  const double s = std::sin(box.theta);
  const double hw = box.w / 2.0;
  const double hh = box.h / 2.0;
  const std::array<Point, 4> local{{{-hw, -hh}, {hw, -hh}, {hw, hh}, {-hw, hh}}};
  Quad out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = {box.cx + local[i].x * c - local[i].y * s, box.cy + local[i].x * s + local[i].y * c};
  }
  return out;
}

OrientedBox fit_corners(const Quad& q) {
  const Point center = (q[0] + q[1] + q[2] + q[3]) * 0.25;
  // Opposite edges are averaged so slightly non-rectangular quads still fit.
  const Point along = (q[1] - q[0]) + (q[2] - q[3]);
  const Point across = (q[2] - q[1]) + (q[3] - q[0]);
  const double w = std::hypot(along.x, along.y) / 2.0;
  const double h = std::hypot(across.x, across.y) / 2.0;
  if (!(w > 0.0) || !(h > 0.0)) {
    throw InvalidBox("degenerate corner quad");
  }
  return canonicalize(center.x, center.y, w, h, std::atan2(along.y, along.x));
}

AxisBox obb_to_hbb(const OrientedBox& box) {
  const Quad q = corners(box);
  AxisBox out{q[0].x, q[0].y, q[0].x, q[0].y};
  for (const Point& p : q) {
    out.xmin = std::min(out.xmin, p.x);
    out.ymin = std::min(out.ymin, p.y);
    out.xmax = std::max(out.xmax, p.x);
    out.ymax = std::max(out.ymax, p.y);
  }
  return out;
}

double signed_area(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(polygon[i], polygon[(i + 1) % n]);
  }
  return twice / 2.0;
}

double polygon_area(std::span<const Point> polygon) { return std::abs(signed_area(polygon)); }

std::vector<Point> clip_convex(std::span<const Point> subject, std::span<const Point> clip) {
  std::vector<Point> output(subject.begin(), subject.end());
  std::vector<Point> input;
  for (std::size_t e = 0; e < clip.size() && !output.empty(); ++e) {
    const Point c0 = clip[e];
    const Point edge = clip[(e + 1) % clip.size()] - c0;
    input.swap(output);
    output.clear();
    for (std::size_t i = 0; i < input.size(); ++i) {
      const Point prev = input[(i + input.size() - 1) % input.size()];
      const Point cur = input[i];
      const double d_prev = cross(edge, prev - c0);
      const double d_cur = cross(edge, cur - c0);
      if (d_cur >= 0.0) {
        if (d_prev < 0.0) {
          output.push_back(prev + (cur - prev) * (d_prev / (d_prev - d_cur)));
        }
        output.push_back(cur);
      } else if (d_prev >= 0.0) {
        output.push_back(prev + (cur - prev) * (d_prev / (d_prev - d_cur)));
      }
    }
  }
  return output;
}

double intersection_area(const OrientedBox& a, const OrientedBox& b) {
  const double reach = (std::hypot(a.w, a.h) + std::hypot(b.w, b.h)) / 2.0;
  if (std::hypot(a.cx - b.cx, a.cy - b.cy) > reach) return 0.0;
  const Quad qa = corners(a);
  const Quad qb = corners(b);
  const double area = polygon_area(clip_convex(qa, qb));
  return area > kAreaEpsilon ? area : 0.0;
}

double rotated_iou(const OrientedBox& a, const OrientedBox& b) {
  if (a == b) return 1.0;
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

OrientedBox rigid_transform(const OrientedBox& box, double angle, Point translation) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return canonicalize(box.cx * c - box.cy * s + translation.x, box.cx * s + box.cy * c + translation.y,
                      box.w, box.h, box.theta + angle);
}

}  // namespace holodet
