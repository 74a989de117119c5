// holodet: command-line front end for the large-image detection toolkit.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "holodet/assignment.hpp"
#include "holodet/config.hpp"
#include "holodet/error.hpp"
#include "holodet/eval.hpp"
#include "holodet/formats.hpp"
#include "holodet/fusion.hpp"
#include "holodet/merge.hpp"
#include "holodet/parallel.hpp"
#include "holodet/pipeline.hpp"
#include "holodet/pyramid.hpp"
#include "holodet/ssrw.hpp"
#include "holodet/synth.hpp"

namespace fs = std::filesystem;
using namespace holodet;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Pipeline configuration file (key = value)");
  cmd->add_option("--seed", opts.seed, "Override the configured seed");
}

PipelineConfig resolve_config(const CommonOptions& opts) {
  PipelineConfig config = opts.config_path.empty() ? PipelineConfig{} : load_config(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;
  config.workers = workers_from_env(config.workers);
  config.validate();
  return config;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

// -- plan / tile -------------------------------------------------------------

struct PlanOptions {
  CommonOptions common;
  int height = 0;
  int width = 0;
  int layer = 0;
};

PyramidPlan plan_for(const PipelineConfig& config, const PlanOptions& o) {
  return plan_pyramid(o.height > 0 ? o.height : config.scene_height, o.width > 0 ? o.width : config.scene_width,
                      config.sigma, config.window_height, config.window_width);
}

int run_plan(const PlanOptions& o) {
  const PipelineConfig config = resolve_config(o.common);
  const PyramidPlan plan = plan_for(config, o);
  std::cout << fmt::format("# image {}x{} sigma {} window {}x{} overlap {} layers {}\n", plan.width, plan.height,
                           plan.sigma, plan.window_width, plan.window_height, config.overlap, plan.layer_count());
  std::cout << "# layer height width windows\n";
  for (int m = 1; m <= plan.layer_count(); ++m) {
    std::cout << fmt::format("{} {} {} {}\n", m, plan.layer(m).height, plan.layer(m).width,
                             tile_layer(plan, m, config.overlap).size());
  }
  return 0;
}

int run_tile(const PlanOptions& o) {
  const PipelineConfig config = resolve_config(o.common);
  const PyramidPlan plan = plan_for(config, o);
  std::cout << "# layer index x0 y0 width height scale\n";
  for (int m = 1; m <= plan.layer_count(); ++m) {
    if (o.layer > 0 && m != o.layer) continue;
    const auto windows = tile_layer(plan, m, config.overlap);
    for (std::size_t i = 0; i < windows.size(); ++i) {
      const TileWindow& w = windows[i];
      std::cout << fmt::format("{} {} {} {} {} {} {}\n", m, i, w.x0, w.y0, w.width, w.height, w.scale);
    }
  }
  return 0;
}

// -- assign ------------------------------------------------------------------

struct AssignOptions {
  PlanOptions plan;
  std::string annotations;
  std::string out_dir;
};

int run_assign(const AssignOptions& o) {
  const PipelineConfig config = resolve_config(o.plan.common);
  const PyramidPlan plan = plan_for(config, o.plan);
  const auto labels = read_annotations_file(o.annotations);
  const LayerAssignment result = assign_to_layers(labels, plan, config.thresholds());

  fs::create_directories(o.out_dir);
  for (const LayerGroup& group : result.layers) {
    std::vector<Annotation> projected;
    for (const AssignedLabel& l : group.labels) projected.push_back(l.projected);
    std::ofstream out = open_output(fs::path(o.out_dir) / fmt::format("layer_{}.txt", group.layer));
    write_annotations(out, projected);
    std::cout << fmt::format("layer {}: {} labels in [{}, {})\n", group.layer, group.labels.size(),
                             config.thresholds().min_for(group.layer), config.thresholds().max_for(group.layer));
  }
  std::ofstream drops = open_output(fs::path(o.out_dir) / "drops.txt");
  drops << "# source longer_side reason\n";
  for (const DroppedLabel& d : result.dropped) {
    drops << fmt::format("{} {} {}\n", d.source, format_number(d.longer_side),
                         d.reason == DroppedLabel::Reason::kTooShort ? "too_short" : "too_long");
  }
  std::cout << fmt::format("dropped {} of {} labels\n", result.dropped.size(), labels.size());
  return 0;
}

// -- ssrw ----------------------------------------------------------------------

struct SsrwOptions {
  CommonOptions common;
  std::string input;
  std::optional<double> mu;
};

// Input lines: `gt cx cy w h theta` followed by that box's `sample x y` lines.
int run_ssrw(const SsrwOptions& o) {
  const PipelineConfig config = resolve_config(o.common);
  const double mu = o.mu.value_or(config.mu);
  std::ifstream in(o.input);
  if (!in) throw Error("cannot open '" + o.input + "'");

  std::vector<OrientedBox> gts;
  std::vector<std::pair<std::size_t, Point>> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string kind;
    if (!(ss >> kind) || kind.front() == '#') continue;
    if (kind == "gt") {
      double cx, cy, w, h, theta;
      if (!(ss >> cx >> cy >> w >> h >> theta)) throw ParseError(o.input, line_no, 1, "expected: gt cx cy w h theta");
      try {
        gts.push_back(canonicalize(cx, cy, w, h, theta));
      } catch (const InvalidBox& e) {
        throw ParseError(o.input, line_no, 1, e.what());
      }
    } else if (kind == "sample") {
      Point p;
      if (!(ss >> p.x >> p.y)) throw ParseError(o.input, line_no, 1, "expected: sample x y");
      if (gts.empty()) throw ParseError(o.input, line_no, 1, "sample before any gt line");
      samples.emplace_back(gts.size() - 1, p);
    } else {
      throw ParseError(o.input, line_no, 1, "unknown record '" + kind + "'");
    }
  }
  const std::vector<double> aspect = normalize_aspect(gts);
  std::cout << "gt,x,y,delta_d,w_proj,h_proj,r_w,r_h,q_w,q_h,r,mu,w_reg\n";
  for (const auto& [g, p] : samples) {
    const SampleWeightRecord rec = regression_weight(gts[g], p, aspect[g], mu);
    std::cout << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", g, format_number(p.x), format_number(p.y),
                             format_number(rec.delta_d), format_number(rec.w_proj), format_number(rec.h_proj),
                             format_number(rec.r_w), format_number(rec.r_h), format_number(rec.q_w),
                             format_number(rec.q_h), format_number(rec.r), format_number(rec.mu),
                             format_number(rec.w_reg));
  }
  return 0;
}

// -- fuse-demo -----------------------------------------------------------------

struct FuseOptions {
  CommonOptions common;
  int size = 1024;
  int window = 256;
  int overlap = 64;
  int levels = 5;
  int stride = 4;
  int channels = 4;
  int points = 100;
};

int run_fuse_demo(const FuseOptions& o) {
  const PipelineConfig config = resolve_config(o.common);
  const PyramidPlan plan = plan_pyramid(o.size, o.size, config.sigma, o.window, o.window);
  std::mt19937_64 rng(mix_seed(config.seed, 7));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const FeaturePyramid pyramid = build_synthetic_pyramid(
      plan, o.overlap, {o.levels, o.stride, o.channels},
      [](int c, Point p) { return std::sin(0.01 * p.x + c) * std::cos(0.013 * p.y - c); });

  const CandidateSelection sel = select_candidates(pyramid);
  std::cout << fmt::format("pyramid: {} layers, {} FPN levels, {} channels\n", plan.layer_count(), o.levels,
                           o.channels);
  for (const LayerFeatures& lf : pyramid.layers) {
    const FeatureMap& m0 = lf.windows.front().levels.front();
    std::cout << fmt::format("  layer {}: {} windows, level-0 grid {}x{} per window, ratio {}\n", lf.layer,
                             lf.windows.size(), m0.width(), m0.height(), m0.effective_ratio);
  }
  std::cout << fmt::format("candidate sets: {}  pass-through features: {}\n", sel.sets.size(),
                           sel.pass_through.size());

  MixWeights weights{o.channels, 3 * o.channels, {}};
  for (int i = 0; i < weights.out_channels * weights.in_channels; ++i) weights.values.push_back(0.3 * unit(rng));
  for (const CandidateSet& set : sel.sets) {
    const AlignedTriple t = align(pyramid, set, 0);
    const FeatureMap fused = fuse(t, weights);
    std::cout << fmt::format(
        "  set P(j={},i={}) ratio {}: upper {}x{} mid {}x{} lower {}x{} (crop {}x{}) -> fused {}x{}x{}\n",
        set.mid.layer, set.mid.level, set.effective_ratio, t.upper.width(), t.upper.height(), t.mid.width(),
        t.mid.height(), t.lower.width(), t.lower.height(), t.lower_crop.width, t.lower_crop.height,
        fused.channels, fused.height(), fused.width());
  }

  // Spatial consistency: stamp impulses and compare their cells after alignment.
  std::size_t checked = 0;
  std::size_t agreed = 0;
  std::uniform_real_distribution<double> coord(0.0, static_cast<double>(o.size));
  for (int k = 0; k < o.points && !sel.sets.empty(); ++k) {
    const Point p{coord(rng), coord(rng)};
    FeaturePyramid impulses = build_synthetic_pyramid(plan, o.overlap, {o.levels, o.stride, o.channels},
                                                      [](int, Point) { return 0.0; });
    stamp_point(impulses, p);
    const CandidateSet& set = sel.sets[static_cast<std::size_t>(k) % sel.sets.size()];
    const auto& windows = impulses.layers[static_cast<std::size_t>(set.mid.layer - 1)].windows;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      const FeatureMap& mid = windows[w].levels[static_cast<std::size_t>(set.mid.level)];
      const auto [gx, gy] = mid.cell_of(p);
      if (gx < mid.extent.x0 || gy < mid.extent.y0 || gx >= mid.extent.x0 + mid.width() ||
          gy >= mid.extent.y0 + mid.height()) {
        continue;
      }
      const AlignedTriple t = align(impulses, set, w);
      const int x = gx - mid.extent.x0;
      const int y = gy - mid.extent.y0;
      ++checked;
      agreed += t.upper.at(0, y, x) > 0.0 && t.mid.at(0, y, x) > 0.0 && t.lower.at(0, y, x) > 0.0;
      break;
    }
  }
  std::cout << fmt::format("spatial consistency: {}/{} impulses land on the same cell in all three grids\n",
                           agreed, checked);
  return agreed == checked ? 0 : 1;
}

// -- merge -----------------------------------------------------------------------

struct MergeOptions {
  CommonOptions common;
  std::string detections;
  std::string output;
  bool no_filter = false;
  std::string mode;
};

int run_merge(const MergeOptions& o) {
  const PipelineConfig config = resolve_config(o.common);
  const MergeMode mode = o.mode.empty() ? config.merge_mode : parse_merge_mode(o.mode);
  auto dets = read_detections_file(o.detections);
  const std::size_t input = dets.size();
  if (config.scale_filter && !o.no_filter) dets = scale_filter(dets, config.thresholds());
  const std::size_t in_band = dets.size();
  const auto merged = global_merge(dets, config.nms_threshold, mode);
  if (o.output.empty()) {
    write_detections(std::cout, merged);
  } else {
    std::ofstream out = open_output(o.output);
    write_detections(out, merged);
  }
  std::cerr << fmt::format("merge: {} in, {} in band, {} kept\n", input, in_band, merged.size());
  return 0;
}

// -- eval ------------------------------------------------------------------------

struct EvalOptions {
  CommonOptions common;
  std::string gt;
  std::string det;
  bool bins = false;
  bool csv = false;
};

int run_eval(const EvalOptions& o) {
  const PipelineConfig config = resolve_config(o.common);
  const EvalImage image{read_annotations_file(o.gt), read_detections_file(o.det)};
  const EvalReport report = evaluate({image}, config.bins, config.iou_sweep);
  std::cout << (o.csv ? format_report_csv(report, o.bins) : format_report(report, o.bins));
  return 0;
}

// -- synth -----------------------------------------------------------------------

struct SynthOptions {
  CommonOptions common;
  std::string out_dir;
  bool detections = false;
};

int run_synth(const SynthOptions& o) {
  const PipelineConfig config = resolve_config(o.common);
  const auto scene = generate_scene(config.scene_spec());
  fs::create_directories(o.out_dir);
  {
    std::ofstream out = open_output(fs::path(o.out_dir) / "gt.txt");
    write_annotations(out, scene);
  }
  if (o.detections) {
    const AxisBox bounds{0.0, 0.0, static_cast<double>(config.scene_width), static_cast<double>(config.scene_height)};
    std::ofstream out = open_output(fs::path(o.out_dir) / "det.txt");
    write_detections(out, perturb_detector(scene, config.perturb_spec(), bounds));
  }
  std::cout << fmt::format("wrote {} instances to {}\n", scene.size(), o.out_dir);
  return 0;
}

// -- pipeline --------------------------------------------------------------------

struct PipelineOptions {
  CommonOptions common;
  std::string output;
};

int run_pipeline_cmd(const PipelineOptions& o) {
  const PipelineConfig config = resolve_config(o.common);
  const std::string report = format_pipeline_report(run_pipeline(config));
  if (o.output.empty()) {
    std::cout << report;
  } else {
    std::ofstream out = open_output(o.output);
    out << report;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holodet: pyramid tiling, rotated-box merging and evaluation for large images"};
  app.require_subcommand(1);

  app.add_flag_callback("--print-default-config", [] {
    std::cout << serialize_config(PipelineConfig{});
    std::exit(0);
  }, "Print the default configuration and exit");

  PlanOptions plan_opts;
  auto* plan = app.add_subcommand("plan", "Print the image pyramid plan");
  add_common(plan, plan_opts.common);
  plan->add_option("--height", plan_opts.height, "Image height (default: scene_height)");
  plan->add_option("--width", plan_opts.width, "Image width (default: scene_width)");

  PlanOptions tile_opts;
  auto* tile = app.add_subcommand("tile", "List sliding windows per pyramid layer");
  add_common(tile, tile_opts.common);
  tile->add_option("--height", tile_opts.height, "Image height (default: scene_height)");
  tile->add_option("--width", tile_opts.width, "Image width (default: scene_width)");
  tile->add_option("--layer", tile_opts.layer, "Only this 1-based layer");

  AssignOptions assign_opts;
  auto* assign = app.add_subcommand("assign", "Split annotations into per-layer label files");
  add_common(assign, assign_opts.plan.common);
  assign->add_option("--ann", assign_opts.annotations, "Annotation file")->required();
  assign->add_option("--height", assign_opts.plan.height, "Image height")->required();
  assign->add_option("--width", assign_opts.plan.width, "Image width")->required();
  assign->add_option("--out", assign_opts.out_dir, "Output directory")->required();

  SsrwOptions ssrw_opts;
  auto* ssrw = app.add_subcommand("ssrw", "Compute shape-sensitive regression weights");
  add_common(ssrw, ssrw_opts.common);
  ssrw->add_option("--input", ssrw_opts.input, "File of `gt` and `sample` records")->required();
  ssrw->add_option("--mu", ssrw_opts.mu, "Adjustment factor (default: config mu)");

  FuseOptions fuse_opts;
  auto* fuse_cmd = app.add_subcommand("fuse-demo", "Run inter-layer feature fusion on a synthetic pyramid");
  add_common(fuse_cmd, fuse_opts.common);
  fuse_cmd->add_option("--size", fuse_opts.size, "Square image size");
  fuse_cmd->add_option("--window", fuse_opts.window, "Square window size");
  fuse_cmd->add_option("--overlap", fuse_opts.overlap, "Window overlap");
  fuse_cmd->add_option("--levels", fuse_opts.levels, "FPN levels");
  fuse_cmd->add_option("--stride", fuse_opts.stride, "Finest FPN stride");
  fuse_cmd->add_option("--channels", fuse_opts.channels, "Feature channels");
  fuse_cmd->add_option("--points", fuse_opts.points, "Impulses for the consistency check");

  MergeOptions merge_opts;
  auto* merge = app.add_subcommand("merge", "Scale-filter and NMS-merge original-frame detections");
  add_common(merge, merge_opts.common);
  merge->add_option("--det", merge_opts.detections, "Detection file")->required();
  merge->add_option("--out", merge_opts.output, "Output file (default: stdout)");
  merge->add_flag("--no-filter", merge_opts.no_filter, "Skip the per-layer scale filter");
  merge->add_option("--mode", merge_opts.mode, "cross-layer | per-layer");

  EvalOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "Evaluate detections against ground truth");
  add_common(eval, eval_opts.common);
  eval->add_option("--gt", eval_opts.gt, "Ground-truth annotation file")->required();
  eval->add_option("--det", eval_opts.det, "Detection file")->required();
  eval->add_flag("--bins", eval_opts.bins, "Include length-binned APs");
  eval->add_flag("--csv", eval_opts.csv, "Machine-readable metric,value output");

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene");
  synth->add_option("--spec", synth_opts.common.config_path, "Configuration file describing the scene");
  synth->add_option("--config", synth_opts.common.config_path, "Alias of --spec");
  synth->add_option("--seed", synth_opts.common.seed, "Override the configured seed");
  synth->add_option("--out", synth_opts.out_dir, "Output directory")->required();
  synth->add_flag("--detections", synth_opts.detections, "Also write perturbed detections (det.txt)");

  PipelineOptions pipe_opts;
  auto* pipeline = app.add_subcommand("pipeline", "Run the end-to-end synthetic pipeline");
  add_common(pipeline, pipe_opts.common);
  pipeline->add_option("--out", pipe_opts.output, "Write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan) return run_plan(plan_opts);
    if (*tile) return run_tile(tile_opts);
    if (*assign) return run_assign(assign_opts);
    if (*ssrw) return run_ssrw(ssrw_opts);
    if (*fuse_cmd) return run_fuse_demo(fuse_opts);
    if (*merge) return run_merge(merge_opts);
    if (*eval) return run_eval(eval_opts);
    if (*synth) return run_synth(synth_opts);
    if (*pipeline) return run_pipeline_cmd(pipe_opts);
  } catch (const std::exception& e) {
    std::cerr << "holodet: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
