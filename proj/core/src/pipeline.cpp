#include "holodet/pipeline.hpp"

#include <fmt/format.h>

#include <cmath>

#include "holodet/parallel.hpp"
#include "holodet/synth.hpp"

namespace holodet {

SceneSpec pipeline_scene_spec(const PipelineConfig& config) {
  SceneSpec spec = config.scene_spec();
  spec.min_length = std::max(spec.min_length, config.min_base);
  spec.max_length = std::nextafter(config.max_length, 0.0);
  return spec;
}

namespace {

struct WindowJob {
  int layer;
  std::size_t window;
};

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  config.validate();
  PipelineResult r;
  r.config = config;
  r.scene_spec = pipeline_scene_spec(config);
  r.scene = generate_scene(r.scene_spec);
  r.plan = plan_pyramid(config.scene_height, config.scene_width, config.sigma, config.window_height,
                        config.window_width);
  r.tilings = tile_pyramid(r.plan, config.overlap);
  const LayerThresholds thresholds = config.thresholds();
  r.assignment = assign_to_layers(r.scene, r.plan, thresholds);

  std::vector<WindowAssignment> per_layer;
  std::vector<WindowJob> jobs;
  for (int m = 1; m <= r.plan.layer_count(); ++m) {
    const auto& windows = r.tilings[static_cast<std::size_t>(m - 1)];
    per_layer.push_back(assign_to_windows(r.assignment.layers[static_cast<std::size_t>(m - 1)], windows));
    for (std::size_t w = 0; w < windows.size(); ++w) jobs.push_back({m, w});
  }

  const PerturbSpec base = config.perturb_spec();
  std::vector<std::vector<Detection>> outputs(jobs.size());
  parallel_for(jobs.size(), config.workers, [&](std::size_t j) {
    const WindowJob& job = jobs[j];
    const TileWindow& win = r.tilings[static_cast<std::size_t>(job.layer - 1)][job.window];
    std::vector<Annotation> labels;
    for (const WindowLabel& wl : per_layer[static_cast<std::size_t>(job.layer - 1)].per_window[job.window]) {
      labels.push_back(wl.label);
    }
    PerturbSpec spec = base;
    spec.seed = mix_seed(base.seed, (static_cast<std::uint64_t>(job.layer) << 32) | job.window);
    const AxisBox bounds{0.0, 0.0, static_cast<double>(win.width), static_cast<double>(win.height)};
    auto dets = perturb_detector(labels, spec, bounds);
    for (Detection& d : dets) {
      d.layer = job.layer;
      d.window = static_cast<int>(job.window);
      d.frame = Frame::kWindow;
    }
    outputs[j] = std::move(dets);
  });

  std::vector<Detection> window_dets;
  for (auto& o : outputs) window_dets.insert(window_dets.end(), o.begin(), o.end());
  r.raw = remap_to_original(window_dets, r.tilings);
  r.filtered = config.scale_filter ? scale_filter(r.raw, thresholds) : r.raw;
  for (const Detection& d : r.filtered) {
    if (!thresholds.admits(d.layer, d.box.longer_side())) ++r.band_violations;
  }
  r.merged = global_merge(r.filtered, config.nms_threshold, config.merge_mode);

  for (int m = 1; m <= r.plan.layer_count(); ++m) {
    const auto idx = static_cast<std::size_t>(m - 1);
    LayerStats s;
    s.layer = m;
    s.height = r.plan.layer(m).height;
    s.width = r.plan.layer(m).width;
    s.windows = r.tilings[idx].size();
    s.labels = r.assignment.layers[idx].labels.size();
    for (const auto& list : per_layer[idx].per_window) s.window_labels += list.size();
    for (const Detection& d : r.raw) s.detections += d.layer == m;
    for (const Detection& d : r.filtered) s.kept_by_filter += d.layer == m;
    r.layers.push_back(s);
  }

  r.report = evaluate({EvalImage{r.scene, r.merged}}, config.bins, config.iou_sweep);
  return r;
}

std::string format_pipeline_report(const PipelineResult& r) {
  std::string out = "== holodet pipeline ==\n";
  out += fmt::format("seed {}  image {}x{}  sigma {}  window {}x{}  overlap {}\n", r.config.seed,
                     r.config.scene_width, r.config.scene_height, r.config.sigma, r.config.window_width,
                     r.config.window_height, r.config.overlap);
  out += fmt::format("planted {} instances (lengths in [{}, {}))\n", r.scene.size(), r.scene_spec.min_length,
                     r.config.max_length);
  out += fmt::format("pyramid: {} layers\n", r.plan.layer_count());
  out += "layer  height   width  windows  labels  attached  raw_dets  in_band\n";
  for (const LayerStats& s : r.layers) {
    out += fmt::format("{:>5} {:>7} {:>7} {:>8} {:>7} {:>9} {:>9} {:>8}\n", s.layer, s.height, s.width, s.windows,
                       s.labels, s.window_labels, s.detections, s.kept_by_filter);
  }
  out += fmt::format("dropped labels: {}\n", r.assignment.dropped.size());
  out += fmt::format("detections: raw {}  filtered {}  merged {}  band violations {}\n", r.raw.size(),
                     r.filtered.size(), r.merged.size(), r.band_violations);
  out += fmt::format("merge: {} NMS at IoU {}\n", to_string(r.config.merge_mode), r.config.nms_threshold);
  out += "-- evaluation --\n";
  out += format_report(r.report);
  return out;
}

}  // namespace holodet
