#pragma once

#include <cstddef>
#include <vector>

#include "holodet/geometry.hpp"

namespace holodet {

struct LayerSize {
  int height = 0;
  int width = 0;
  double exact_height = 0.0;  // H / sigma^(m-1) before rounding
  double exact_width = 0.0;
  double scale = 1.0;         // sigma^(m-1), layer -> original multiplier
};

/// Dynamic image pyramid. Layers are 1-based in the API; `layers[0]` is
/// layer 1 at full resolution.
///
/// Layer count is the smallest n with H / sigma^(n-1) <= window_height or
/// W / sigma^(n-1) <= window_width, tested on the unrounded sizes. The
/// termination threshold doubles as the sliding-window size.
struct PyramidPlan {
  int height = 0;
  int width = 0;
  double sigma = 2.0;
  int window_height = 1024;
  int window_width = 1024;
  std::vector<LayerSize> layers;

  int layer_count() const { return static_cast<int>(layers.size()); }
  const LayerSize& layer(int m) const;
  double scale(int m) const { return layer(m).scale; }
};

PyramidPlan plan_pyramid(int height, int width, double sigma, int window_height, int window_width);

/// One sliding-window placement. `x0`, `y0`, `width`, `height` are in
/// layer-m pixels.
struct TileWindow {
  int layer = 1;
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;
  double scale = 1.0;

  bool contains(Point layer_point) const {
    return layer_point.x >= x0 && layer_point.x <= x0 + width && layer_point.y >= y0 &&
           layer_point.y <= y0 + height;
  }
  friend bool operator==(const TileWindow&, const TileWindow&) = default;
};

/// Window origins along one axis: stride = window - overlap, the last window
/// shifted back to end on the layer edge. A layer shorter than the window
/// gets a single clamped window.
std::vector<int> window_origins(int layer_extent, int window, int overlap);

/// Row-major tiling of layer `m`. Throws ConfigError unless
/// 0 <= overlap < min(window sides).
std::vector<TileWindow> tile_layer(const PyramidPlan& plan, int m, int overlap);

Point window_to_layer(const TileWindow& win, Point p);
Point layer_to_window(const TileWindow& win, Point p);
Point window_to_original(const TileWindow& win, Point p);
Point original_to_layer(const PyramidPlan& plan, int m, Point p);
Point layer_to_original(const PyramidPlan& plan, int m, Point p);

/// Scales center and sides by 1 / sigma^(m-1); theta is unchanged.
OrientedBox project_box(const OrientedBox& box, const PyramidPlan& plan, int m);
OrientedBox unproject_box(const OrientedBox& box, const PyramidPlan& plan, int m);

OrientedBox box_to_window(const OrientedBox& layer_box, const TileWindow& win);
OrientedBox box_from_window(const OrientedBox& window_box, const TileWindow& win);

}  // namespace holodet
