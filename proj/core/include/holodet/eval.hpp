#pragma once

#include <optional>
#include <string>
#include <vector>

#include "holodet/detection.hpp"

namespace holodet {

/// Right-closed interval (lo, hi] on the longer side, original pixels.
struct LengthBin {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double length) const { return length > lo && length <= hi; }
  friend bool operator==(const LengthBin&, const LengthBin&) = default;
};

struct LengthBins {
  std::vector<LengthBin> bins;

  /// short (0,50], middle (50,200], large (200,800], huge (800,16384].
  static LengthBins standard();
  /// Builds contiguous bins from ascending edges; throws ConfigError.
  static LengthBins from_edges(const std::vector<double>& edges, const std::vector<std::string>& names);

  /// Index of the bin holding `length`, or -1.
  int bin_of(double length) const;
  std::vector<double> edges() const;
  friend bool operator==(const LengthBins&, const LengthBins&) = default;
};

enum class MatchFlag { kTruePositive, kFalsePositive, kIgnored };

struct MatchResult {
  std::vector<MatchFlag> flags;     // parallel to the detections
  std::vector<int> matched_gt;      // gt index per detection, -1 if none
  std::size_t false_negatives = 0;  // in-scope gts left unmatched
};

/// Greedy matching for one image and one class. Detections are visited by
/// descending score (ties by index); each takes the unmatched gt with the
/// highest IoU (ties by gt index) when that IoU reaches the threshold.
MatchResult match(const std::vector<Detection>& dets, const std::vector<Annotation>& gts,
                  double iou_threshold);

/// Scoped variant. A detection that cannot reach an in-scope gt but reaches
/// an unmatched out-of-scope gt consumes it and is ignored; an unmatched
/// detection counts as a false positive only if `det_in_scope` says so.
MatchResult match(const std::vector<Detection>& dets, const std::vector<Annotation>& gts,
                  double iou_threshold, const std::vector<bool>& gt_in_scope,
                  const std::vector<bool>& det_in_scope);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

/// 11-point interpolated AP: mean over r in {0, 0.1, ..., 1} of the best
/// precision at recall >= r (0 where none).
double voc07_ap(const std::vector<PrPoint>& curve);

struct EvalImage {
  std::vector<Annotation> gts;
  std::vector<Detection> dets;
};

struct IouSweep {
  double start = 0.5;
  double stop = 0.95;
  double step = 0.05;

  std::vector<double> thresholds() const;
  friend bool operator==(const IouSweep&, const IouSweep&) = default;
};

struct ClassCurve {
  std::string label;
  std::size_t positives = 0;
  std::vector<PrPoint> points;
  std::optional<double> ap;
};

struct BinResult {
  LengthBin bin;
  std::size_t gt_count = 0;
  std::optional<double> ap;  // absent when the bin holds no gts
};

struct EvalReport {
  std::vector<std::pair<double, std::optional<double>>> ap_by_threshold;
  std::optional<double> ap50;
  std::optional<double> ap75;
  std::optional<double> map;  // mean over the IoU sweep
  std::vector<BinResult> bins;  // AP at IoU 0.5 per length bin
  std::size_t tp = 0;           // at IoU 0.5
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t gt_count = 0;
  std::vector<ClassCurve> curves;  // per class at IoU 0.5
};

/// AP for one IoU threshold, optionally restricted to one length bin.
/// Classes are evaluated separately and averaged; absent without gts.
std::optional<double> average_precision(const std::vector<EvalImage>& images, double iou_threshold,
                                        const LengthBin* bin = nullptr,
                                        std::vector<ClassCurve>* curves = nullptr);

EvalReport evaluate(const std::vector<EvalImage>& images, const LengthBins& bins = LengthBins::standard(),
                    const IouSweep& sweep = {});

/// Aligned human-readable table.
std::string format_report(const EvalReport& report, bool with_bins = true);
/// `key,value` lines; absent values are written as `NA`.
std::string format_report_csv(const EvalReport& report, bool with_bins = true);

}  // namespace holodet
