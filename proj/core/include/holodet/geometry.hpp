#pragma once

#include <array>
#include <span>
#include <vector>

namespace holodet {

inline constexpr double kPi = 3.14159265358979323846;

/// Intersections smaller than this (px^2) are treated as empty.
inline constexpr double kAreaEpsilon = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
  friend bool operator==(const Point&, const Point&) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

// Rotated rectangle in long-side-first form. `w` runs along `theta`, measured
// from +x towards +y (image axes, y down), and is never shorter than `h`.
// Construct through canonicalize() unless the values are already canonical.
struct OrientedBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
  double theta = 0.0;

  double longer_side() const { return w; }
  double area() const { return w * h; }
  Point center() const { return {cx, cy}; }
  friend bool operator==(const OrientedBox&, const OrientedBox&) = default;
};

struct AxisBox {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  friend bool operator==(const AxisBox&, const AxisBox&) = default;
};

using Quad = std::array<Point, 4>;

/// Wraps an angle into [-pi/2, pi/2).
double wrap_half_turn(double theta);

/// Long-side-first form with theta in [-pi/2, pi/2). Throws InvalidBox for
/// non-finite values or non-positive sides.
OrientedBox canonicalize(double cx, double cy, double w, double h, double theta);
OrientedBox canonicalize(const OrientedBox& raw);

/// Corners starting at local (-w/2, -h/2), then (+w/2, -h/2), (+w/2, +h/2),
/// (-w/2, +h/2), each rotated by theta about the center. With y pointing down
/// this walk is clockwise on screen.
Quad corners(const OrientedBox& box);

/// Inverse of corners(): fits the rectangle spanned by a corner walk.
/// Throws InvalidBox when the quad is degenerate.
OrientedBox fit_corners(const Quad& quad);

AxisBox obb_to_hbb(const OrientedBox& box);

/// Standard shoelace sum (positive for the corner walk above).
double signed_area(std::span<const Point> polygon);
double polygon_area(std::span<const Point> polygon);

/// Clips `subject` against the convex `clip` polygon (both with positive
/// signed area). Returns the intersection polygon, possibly empty.
std::vector<Point> clip_convex(std::span<const Point> subject, std::span<const Point> clip);

double intersection_area(const OrientedBox& a, const OrientedBox& b);

/// Intersection over union in [0, 1]; exactly 1 for identical boxes.
double rotated_iou(const OrientedBox& a, const OrientedBox& b);

/// Applies x' = R(angle) x + t to the box.
OrientedBox rigid_transform(const OrientedBox& box, double angle, Point translation);

}  // namespace holodet
