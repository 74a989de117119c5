#pragma once

#include <functional>
#include <vector>

#include "holodet/pyramid.hpp"

namespace holodet {

// Inter-layer feature fusion over per-window feature pyramids.
//
// Every pyramid layer j is tiled into windows and each window carries FPN
// levels i = 0, 1, ... with cell size base_stride * 2^i layer pixels. A cell
// of (j, i) therefore spans sigma^(j-1) * base_stride * 2^i original pixels
// (its effective ratio). With sigma equal to the FPN ratio of 2, the
// features (j-1, i+1), (j, i) and (j+1, i-1) share one effective ratio and
// form a candidate set; (j, i) is replaced by the fusion of the three.

/// Rectangle of cells in a lattice whose cell (0, 0) starts at the origin
/// of the original image.
struct CellRect {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;

  bool empty() const { return width <= 0 || height <= 0; }
  friend bool operator==(const CellRect&, const CellRect&) = default;
};

/// Dense channel-major grid. `extent` places the grid in its lattice.
struct FeatureMap {
  int layer = 1;
  int level = 0;
  int channels = 0;
  CellRect extent;
  double cell_size = 1.0;        // layer pixels per cell
  double effective_ratio = 1.0;  // original pixels per cell
  std::vector<double> values;

  int height() const { return extent.height; }
  int width() const { return extent.width; }
  double& at(int c, int y, int x) {
    return values[(static_cast<std::size_t>(c) * extent.height + y) * extent.width + x];
  }
  double at(int c, int y, int x) const {
    return values[(static_cast<std::size_t>(c) * extent.height + y) * extent.width + x];
  }
  /// Lattice cell holding an original-image point.
  std::pair<int, int> cell_of(Point original) const;
  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;
};

struct WindowFeatures {
  TileWindow window;
  std::vector<FeatureMap> levels;
};

struct LayerFeatures {
  int layer = 1;
  std::vector<WindowFeatures> windows;
};

struct FeaturePyramid {
  double sigma = 2.0;
  double fpn_ratio = 2.0;
  int base_stride = 4;
  int level_count = 5;
  int channels = 4;
  std::vector<LayerFeatures> layers;  // layers[j-1]

  const FeatureMap& map(int layer, int level, std::size_t window) const;
  friend bool operator==(const FeaturePyramid&, const FeaturePyramid&) = default;
};

struct FeatureKey {
  int layer = 1;
  int level = 0;
  friend bool operator==(const FeatureKey&, const FeatureKey&) = default;
};

struct CandidateSet {
  FeatureKey upper;  // (j-1, i+1)
  FeatureKey mid;    // (j, i), the feature being updated
  FeatureKey lower;  // (j+1, i-1)
  double effective_ratio = 0.0;
};

struct CandidateSelection {
  std::vector<CandidateSet> sets;
  std::vector<FeatureKey> pass_through;
};

/// Enumerates every complete triple. Throws ConfigError when the FPN ratio
/// differs from sigma.
CandidateSelection select_candidates(const FeaturePyramid& pyramid);

struct AlignedTriple {
  FeatureMap upper;
  FeatureMap mid;
  FeatureMap lower;
  CellRect upper_source;  // rect mosaicked from layer j-1, in its finer lattice
  CellRect lower_crop;    // part of mid's extent covered by layer j+1 data
};

/// Averages overlapping cells of same-lattice maps into `target`; cells no
/// map covers are zero.
FeatureMap mosaic(const std::vector<const FeatureMap*>& maps, const CellRect& target);

/// 2x2 average pooling; sizes must be even.
FeatureMap avg_pool2(const FeatureMap& in);

/// Brings the set's members onto the extent of window `mid_window` of layer
/// j. The upper member is built from the level-i windows of layer j-1:
/// mosaicked over the mid window's footprint and 2x average pooled, which is
/// the level-(i+1) representation at mid's effective ratio. The lower member
/// is cropped from the layer j+1 mosaic at the same cells.
AlignedTriple align(const FeaturePyramid& pyramid, const CandidateSet& set, std::size_t mid_window);

/// Row-major out_channels x in_channels matrix for a 1x1 convolution.
struct MixWeights {
  int out_channels = 0;
  int in_channels = 0;
  std::vector<double> values;

  double at(int o, int k) const { return values[static_cast<std::size_t>(o) * in_channels + k]; }
};

double sigmoid(double x);

/// sigmoid(W * concat(upper, mid, lower)) per cell. `weights.in_channels`
/// must equal the total concatenated channel count.
FeatureMap fuse(const AlignedTriple& triple, const MixWeights& weights);

/// Fuses every candidate set; all reads come from `pyramid`, so fusion
/// order does not matter. Features outside any set are copied unchanged.
FeaturePyramid apply_iff(const FeaturePyramid& pyramid, const MixWeights& weights);

struct SyntheticFeatureSpec {
  int level_count = 5;
  int base_stride = 4;
  int channels = 4;
};

/// Value of channel `c` at an original-image point.
using FeatureField = std::function<double(int c, Point original)>;

/// Samples `field` at level-0 cell centers of every window and builds
/// coarser levels by 2x average pooling. Window sizes and origins must be
/// multiples of the coarsest cell size (ConfigError otherwise).
FeaturePyramid build_synthetic_pyramid(const PyramidPlan& plan, int overlap,
                                       const SyntheticFeatureSpec& spec, const FeatureField& field);

/// Sets the cell holding `original` to `value` in every map that covers it.
void stamp_point(FeaturePyramid& pyramid, Point original, double value = 1.0);

}  // namespace holodet
