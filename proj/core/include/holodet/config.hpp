#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "holodet/assignment.hpp"
#include "holodet/eval.hpp"
#include "holodet/losses.hpp"
#include "holodet/merge.hpp"
#include "holodet/synth.hpp"

namespace holodet {

inline constexpr int kConfigSchemaVersion = 1;

/// Shared settings for every subcommand. Text form is one `key = value`
/// per line with `#` comments; see serialize_config() for the full key set.
struct PipelineConfig {
  int schema_version = kConfigSchemaVersion;

  double sigma = 2.0;
  int window_width = 1024;
  int window_height = 1024;
  int overlap = 200;
  double min_base = 15.0;
  double max_length = 1448.0;
  double nms_threshold = 0.5;
  MergeMode merge_mode = MergeMode::kCrossLayerNms;
  bool scale_filter = true;
  double mu = 1.0;
  double focal_alpha = 0.25;
  double focal_gamma = 2.0;
  IouSweep iou_sweep;
  LengthBins bins = LengthBins::standard();
  std::uint64_t seed = 0;
  int workers = 1;

  int scene_height = 4096;
  int scene_width = 4096;
  std::vector<int> scene_per_bin = {4, 4, 4, 4};
  double scene_min_length = 12.0;
  double scene_aspect_min = 2.0;
  double scene_aspect_max = 50.0;
  double scene_min_short_side = 2.0;
  double scene_max_iou = 0.1;

  double jitter_center = 0.0;
  double jitter_size = 0.0;
  double jitter_angle = 0.0;
  double miss_rate = 0.0;
  double fp_rate = 0.0;

  LayerThresholds thresholds() const { return {min_base, max_length}; }
  FocalParams focal() const { return {focal_alpha, focal_gamma}; }
  SceneSpec scene_spec() const;
  PerturbSpec perturb_spec() const;
  /// Throws ConfigError on out-of-range values.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Parses the text form on top of the defaults. Throws ParseError naming
/// the offending line and column.
PipelineConfig parse_config(std::istream& in, const std::string& source = {});
PipelineConfig load_config(const std::string& path);
std::string serialize_config(const PipelineConfig& config);

}  // namespace holodet
