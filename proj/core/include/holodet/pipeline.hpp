#pragma once

#include <string>
#include <vector>

#include "holodet/assignment.hpp"
#include "holodet/config.hpp"
#include "holodet/eval.hpp"
#include "holodet/merge.hpp"
#include "holodet/pyramid.hpp"

namespace holodet {

struct LayerStats {
  int layer = 1;
  int height = 0;
  int width = 0;
  std::size_t windows = 0;
  std::size_t labels = 0;
  std::size_t window_labels = 0;  // attachments, counting overlap duplicates
  std::size_t detections = 0;     // raw, before filtering
  std::size_t kept_by_filter = 0;
};

struct PipelineResult {
  PipelineConfig config;
  SceneSpec scene_spec;  // as actually generated
  std::vector<Annotation> scene;
  PyramidPlan plan;
  PyramidTiling tilings;
  LayerAssignment assignment;
  std::vector<LayerStats> layers;
  std::vector<Detection> raw;       // original frame, before filtering
  std::vector<Detection> filtered;  // after scale_filter (== raw when disabled)
  std::vector<Detection> merged;
  std::size_t band_violations = 0;  // filtered detections outside their layer band
  EvalReport report;
};

/// The scene the pipeline plants: the configured scene with lengths kept
/// inside [min_base, max_length), so every instance has a layer.
SceneSpec pipeline_scene_spec(const PipelineConfig& config);

/// synth -> plan -> tile -> assign -> per-window perturbation detector ->
/// remap -> scale filter -> merge -> evaluate. Deterministic for a given
/// config, independent of the worker count.
PipelineResult run_pipeline(const PipelineConfig& config);

std::string format_pipeline_report(const PipelineResult& result);

}  // namespace holodet
