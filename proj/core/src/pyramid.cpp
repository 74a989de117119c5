#include "holodet/pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "holodet/error.hpp"

namespace holodet {

const LayerSize& PyramidPlan::layer(int m) const {
  if (m < 1 || m > layer_count()) {
    throw Error("layer " + std::to_string(m) + " outside plan with " +
                std::to_string(layer_count()) + " layers");
  }
  return layers[static_cast<std::size_t>(m - 1)];
}

PyramidPlan plan_pyramid(int height, int width, double sigma, int window_height, int window_width) {
  if (height < 1 || width < 1) throw ConfigError("image size must be at least 1x1");
  if (!(sigma > 1.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be > 1");
  if (window_height < 1 || window_width < 1) throw ConfigError("window size must be at least 1x1");

  PyramidPlan plan;
  plan.height = height;
  plan.width = width;
  plan.sigma = sigma;
  plan.window_height = window_height;
  plan.window_width = window_width;
  for (int m = 1;; ++m) {
    LayerSize layer;
    layer.scale = std::pow(sigma, m - 1);
    layer.exact_height = height / layer.scale;
    layer.exact_width = width / layer.scale;
    layer.height = std::max(1, static_cast<int>(std::lround(layer.exact_height)));
    layer.width = std::max(1, static_cast<int>(std::lround(layer.exact_width)));
    plan.layers.push_back(layer);
    if (layer.exact_height <= window_height || layer.exact_width <= window_width) break;
  }
  return plan;
}

std::vector<int> window_origins(int layer_extent, int window, int overlap) {
  if (layer_extent <= window) return {0};
  const int stride = window - overlap;
  std::vector<int> out;
  for (int o = 0;; o += stride) {
    out.push_back(std::min(o, layer_extent - window));
    if (o + window >= layer_extent) break;
  }
  return out;
}

std::vector<TileWindow> tile_layer(const PyramidPlan& plan, int m, int overlap) {
  if (overlap < 0 || overlap >= std::min(plan.window_height, plan.window_width)) {
    throw ConfigError("overlap must satisfy 0 <= overlap < window size");
  }
  const LayerSize& size = plan.layer(m);
  const int win_w = std::min(plan.window_width, size.width);
  const int win_h = std::min(plan.window_height, size.height);
  std::vector<TileWindow> out;
  for (int y0 : window_origins(size.height, plan.window_height, overlap)) {
    for (int x0 : window_origins(size.width, plan.window_width, overlap)) {
      out.push_back({m, x0, y0, win_w, win_h, size.scale});
    }
  }
  return out;
}

Point window_to_layer(const TileWindow& win, Point p) { return {win.x0 + p.x, win.y0 + p.y}; }

Point layer_to_window(const TileWindow& win, Point p) { return {p.x - win.x0, p.y - win.y0}; }

Point window_to_original(const TileWindow& win, Point p) {
  return window_to_layer(win, p) * win.scale;
}

Point original_to_layer(const PyramidPlan& plan, int m, Point p) {
  const double s = plan.scale(m);
  return {p.x / s, p.y / s};
}

Point layer_to_original(const PyramidPlan& plan, int m, Point p) { return p * plan.scale(m); }

OrientedBox project_box(const OrientedBox& box, const PyramidPlan& plan, int m) {
  const double s = plan.scale(m);
  return {box.cx / s, box.cy / s, box.w / s, box.h / s, box.theta};
}

OrientedBox unproject_box(const OrientedBox& box, const PyramidPlan& plan, int m) {
  const double s = plan.scale(m);
  return {box.cx * s, box.cy * s, box.w * s, box.h * s, box.theta};
}

OrientedBox box_to_window(const OrientedBox& layer_box, const TileWindow& win) {
  OrientedBox out = layer_box;
  out.cx -= win.x0;
  out.cy -= win.y0;
  return out;
}

OrientedBox box_from_window(const OrientedBox& window_box, const TileWindow& win) {
  OrientedBox out = window_box;
  out.cx += win.x0;
  out.cy += win.y0;
  return out;
}

}  // namespace holodet
