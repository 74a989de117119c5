#include "holodet/eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "holodet/error.hpp"

namespace holodet {

LengthBins LengthBins::standard() {
  return from_edges({0.0, 50.0, 200.0, 800.0, 16384.0}, {"short", "middle", "large", "huge"});
}

LengthBins LengthBins::from_edges(const std::vector<double>& edges, const std::vector<std::string>& names) {
  if (edges.size() < 2) throw ConfigError("length bins need at least two edges");
  if (names.size() != edges.size() - 1) throw ConfigError("length bins need one name per interval");
  LengthBins out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) throw ConfigError("length bin edges must increase strictly");
    out.bins.push_back({names[i], edges[i], edges[i + 1]});
  }
  return out;
}

int LengthBins::bin_of(double length) const {
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (bins[i].contains(length)) return static_cast<int>(i);
  }
  return -1;
}

std::vector<double> LengthBins::edges() const {
  std::vector<double> out;
  for (const LengthBin& b : bins) out.push_back(b.lo);
  if (!bins.empty()) out.push_back(bins.back().hi);
  return out;
}

std::vector<double> IouSweep::thresholds() const {
  if (!(step > 0.0) || stop < start) throw ConfigError("IoU sweep needs step > 0 and stop >= start");
  const auto count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(std::round((start + k * step) * 1e9) / 1e9);
  return out;
}

MatchResult match(const std::vector<Detection>& dets, const std::vector<Annotation>& gts,
                  double iou_threshold) {
  return match(dets, gts, iou_threshold, std::vector<bool>(gts.size(), true),
               std::vector<bool>(dets.size(), true));
}

MatchResult match(const std::vector<Detection>& dets, const std::vector<Annotation>& gts,
                  double iou_threshold, const std::vector<bool>& gt_in_scope,
                  const std::vector<bool>& det_in_scope) {
  MatchResult out;
  out.flags.assign(dets.size(), MatchFlag::kFalsePositive);
  out.matched_gt.assign(dets.size(), -1);
  std::vector<bool> taken(gts.size(), false);

  for (std::size_t d : score_order(dets)) {
    int best_in = -1;
    int best_out = -1;
    double iou_in = -1.0;
    double iou_out = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double iou = rotated_iou(dets[d].box, gts[g].box);
      if (iou < iou_threshold) continue;
      if (gt_in_scope[g]) {
        if (iou > iou_in) { iou_in = iou; best_in = static_cast<int>(g); }
      } else if (iou > iou_out) {
        iou_out = iou;
        best_out = static_cast<int>(g);
      }
    }
    if (best_in >= 0) {
      taken[static_cast<std::size_t>(best_in)] = true;
      out.flags[d] = MatchFlag::kTruePositive;
      out.matched_gt[d] = best_in;
    } else if (best_out >= 0) {
      taken[static_cast<std::size_t>(best_out)] = true;
      out.flags[d] = MatchFlag::kIgnored;
      out.matched_gt[d] = best_out;
    } else {
      out.flags[d] = det_in_scope[d] ? MatchFlag::kFalsePositive : MatchFlag::kIgnored;
    }
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (gt_in_scope[g] && !taken[g]) ++out.false_negatives;
  }
  return out;
}

double voc07_ap(const std::vector<PrPoint>& curve) {
  double sum = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double r = k / 10.0;
    double best = 0.0;
    for (const PrPoint& p : curve) {
      if (p.recall >= r) best = std::max(best, p.precision);
    }
    sum += best;
  }
  return sum / 11.0;
}

namespace {

std::set<std::string> gt_labels(const std::vector<EvalImage>& images) {
  std::set<std::string> out;
  for (const EvalImage& img : images) {
    for (const Annotation& a : img.gts) out.insert(a.label);
  }
  return out;
}

struct Scored {
  double score;
  std::size_t image;
  std::size_t index;
  bool tp;
};

struct Tally {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

ClassCurve class_curve(const std::vector<EvalImage>& images, const std::string& label,
                       double iou_threshold, const LengthBin* bin, Tally* tally) {
  ClassCurve curve;
  curve.label = label;
  std::vector<Scored> entries;
  for (std::size_t im = 0; im < images.size(); ++im) {
    std::vector<Annotation> gts;
    std::vector<bool> gt_scope;
    for (const Annotation& a : images[im].gts) {
      if (a.label != label) continue;
      gts.push_back(a);
      gt_scope.push_back(bin == nullptr || bin->contains(a.box.longer_side()));
    }
    std::vector<Detection> dets;
    std::vector<bool> det_scope;
    for (const Detection& d : images[im].dets) {
      if (d.label != label) continue;
      dets.push_back(d);
      det_scope.push_back(bin == nullptr || bin->contains(d.box.longer_side()));
    }
    curve.positives += static_cast<std::size_t>(std::count(gt_scope.begin(), gt_scope.end(), true));
    const MatchResult m = match(dets, gts, iou_threshold, gt_scope, det_scope);
    for (std::size_t d = 0; d < dets.size(); ++d) {
      if (m.flags[d] == MatchFlag::kIgnored) continue;
      entries.push_back({dets[d].score, im, d, m.flags[d] == MatchFlag::kTruePositive});
    }
    if (tally != nullptr) tally->fn += m.false_negatives;
  }
  std::sort(entries.begin(), entries.end(), [](const Scored& a, const Scored& b) {
    return std::tie(b.score, a.image, a.index) < std::tie(a.score, b.image, b.index);
  });

  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const Scored& e : entries) {
    (e.tp ? tp : fp) += 1;
    if (curve.positives > 0) {
      curve.points.push_back({static_cast<double>(tp) / static_cast<double>(curve.positives),
                              static_cast<double>(tp) / static_cast<double>(tp + fp)});
    }
  }
  if (tally != nullptr) {
    tally->tp += tp;
    tally->fp += fp;
  }
  if (curve.positives > 0) curve.ap = voc07_ap(curve.points);
  return curve;
}

std::optional<double> mean_present(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) { sum += *v; ++n; }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::optional<double> average_precision_impl(const std::vector<EvalImage>& images, double iou_threshold,
                                             const LengthBin* bin, std::vector<ClassCurve>* curves,
                                             Tally* tally) {
  std::vector<std::optional<double>> aps;
  for (const std::string& label : gt_labels(images)) {
    ClassCurve c = class_curve(images, label, iou_threshold, bin, tally);
    aps.push_back(c.ap);
    if (curves != nullptr) curves->push_back(std::move(c));
  }
  return mean_present(aps);
}

}  // namespace

std::optional<double> average_precision(const std::vector<EvalImage>& images, double iou_threshold,
                                        const LengthBin* bin, std::vector<ClassCurve>* curves) {
  return average_precision_impl(images, iou_threshold, bin, curves, nullptr);
}

EvalReport evaluate(const std::vector<EvalImage>& images, const LengthBins& bins, const IouSweep& sweep) {
  EvalReport report;
  for (const EvalImage& img : images) report.gt_count += img.gts.size();

  Tally tally;
  report.ap50 = average_precision_impl(images, 0.5, nullptr, &report.curves, &tally);
  report.tp = tally.tp;
  report.fp = tally.fp;
  report.fn = tally.fn;
  report.ap75 = average_precision(images, 0.75);

  std::vector<std::optional<double>> sweep_aps;
  for (double t : sweep.thresholds()) {
    std::optional<double> ap;
    if (t == 0.5) {
      ap = report.ap50;
    } else if (t == 0.75) {
      ap = report.ap75;
    } else {
      ap = average_precision(images, t);
    }
    report.ap_by_threshold.emplace_back(t, ap);
    sweep_aps.push_back(ap);
  }
  report.map = mean_present(sweep_aps);

  for (const LengthBin& bin : bins.bins) {
    BinResult r{bin, 0, std::nullopt};
    for (const EvalImage& img : images) {
      r.gt_count += static_cast<std::size_t>(std::count_if(img.gts.begin(), img.gts.end(), [&](const Annotation& a) {
        return bin.contains(a.box.longer_side());
      }));
    }
    r.ap = average_precision(images, 0.5, &bin);
    report.bins.push_back(std::move(r));
  }
  return report;
}

namespace {

std::string show(const std::optional<double>& v, bool csv) {
  if (!v) return csv ? "NA" : "-";
  return csv ? fmt::format("{:.10f}", *v) : fmt::format("{:.4f}", *v);
}

std::string bin_key(const std::string& name) {
  if (name == "short") return "AP_sh";
  if (name == "middle") return "AP_md";
  if (name == "large") return "AP_lg";
  if (name == "huge") return "AP_hg";
  return "AP_" + name;
}

}  // namespace

std::string format_report(const EvalReport& r, bool with_bins) {
  std::string out;
  out += fmt::format("{:<10} {:>8}\n", "mAP", show(r.map, false));
  out += fmt::format("{:<10} {:>8}\n", "AP_50", show(r.ap50, false));
  out += fmt::format("{:<10} {:>8}\n", "AP_75", show(r.ap75, false));
  for (const BinResult& b : r.bins) {
    if (!with_bins) break;
    out += fmt::format("{:<10} {:>8}   ({} gts in ({:g}, {:g}])\n", bin_key(b.bin.name), show(b.ap, false),
                       b.gt_count, b.bin.lo, b.bin.hi);
  }
  for (const auto& [t, ap] : r.ap_by_threshold) {
    out += fmt::format("AP@{:<7.2f} {:>8}\n", t, show(ap, false));
  }
  out += fmt::format("TP {}  FP {}  FN {}  GT {}\n", r.tp, r.fp, r.fn, r.gt_count);
  return out;
}

std::string format_report_csv(const EvalReport& r, bool with_bins) {
  std::string out = "metric,value\n";
  out += "mAP," + show(r.map, true) + "\n";
  out += "AP_50," + show(r.ap50, true) + "\n";
  out += "AP_75," + show(r.ap75, true) + "\n";
  for (const BinResult& b : r.bins) {
    if (!with_bins) break;
    out += bin_key(b.bin.name) + "," + show(b.ap, true) + "\n";
  }
  for (const auto& [t, ap] : r.ap_by_threshold) out += fmt::format("AP@{:.2f},", t) + show(ap, true) + "\n";
  out += fmt::format("TP,{}\nFP,{}\nFN,{}\nGT,{}\n", r.tp, r.fp, r.fn, r.gt_count);
  return out;
}

}  // namespace holodet
