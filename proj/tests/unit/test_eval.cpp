#include <gtest/gtest.h>

#include <random>

#include "datasets.hpp"
#include "holodet/error.hpp"
#include "holodet/eval.hpp"
#include "oracles.hpp"

using namespace holodet;

namespace {

Annotation gt(const OrientedBox& box, const std::string& label = "bridge") { return {box, label, 0}; }
Detection det(const OrientedBox& box, double score, const std::string& label = "bridge") {
  return {box, score, label, 1, -1, Frame::kOriginal};
}

std::vector<EvalImage> perfect(const std::vector<EvalImage>& images) {
  std::vector<EvalImage> out = images;
  for (EvalImage& img : out) {
    img.dets.clear();
    for (const Annotation& a : img.gts) img.dets.push_back(det(a.box, 1.0, a.label));
  }
  return out;
}

void expect_optional_near(const std::optional<double>& a, const std::optional<double>& b, double tol) {
  ASSERT_EQ(a.has_value(), b.has_value());
  if (a) EXPECT_NEAR(*a, *b, tol);
}

}  // namespace

TEST(LengthBins, StandardPartition) {
  const LengthBins bins = LengthBins::standard();
  ASSERT_EQ(bins.bins.size(), 4u);
  EXPECT_EQ(bins.bin_of(50.0), 0);
  EXPECT_EQ(bins.bin_of(50.5), 1);
  EXPECT_EQ(bins.bin_of(800.0), 2);
  EXPECT_EQ(bins.bin_of(16384.0), 3);
  EXPECT_EQ(bins.bin_of(20000.0), -1);
  EXPECT_EQ(bins.edges(), std::vector<double>({0, 50, 200, 800, 16384}));
  EXPECT_THROW(LengthBins::from_edges({0, 10, 5}, {"a", "b"}), ConfigError);
  EXPECT_THROW(LengthBins::from_edges({0, 10}, {"a", "b"}), ConfigError);
}

TEST(LengthBins, GtCountsSumToTotal) {
  const auto images = holodet::testing::eval_dataset(5);
  const EvalReport r = evaluate(images);
  std::size_t sum = 0;
  for (const BinResult& b : r.bins) sum += b.gt_count;
  EXPECT_EQ(sum, r.gt_count);
}

TEST(IouSweep, Thresholds) {
  const auto t = IouSweep{}.thresholds();
  ASSERT_EQ(t.size(), 10u);
  EXPECT_EQ(t.front(), 0.5);
  EXPECT_EQ(t[5], 0.75);
  EXPECT_EQ(t.back(), 0.95);
}

TEST(Match, PerfectOneToOne) {
  const std::vector<Annotation> gts = {gt({0, 0, 50, 10, 0}), gt({200, 0, 50, 10, 0.5})};
  const MatchResult m = match({det(gts[1].box, 0.9), det(gts[0].box, 0.8)}, gts, 0.5);
  EXPECT_EQ(m.flags, std::vector<MatchFlag>(2, MatchFlag::kTruePositive));
  EXPECT_EQ(m.matched_gt, std::vector<int>({1, 0}));
  EXPECT_EQ(m.false_negatives, 0u);
}

TEST(Match, DuplicateIsFalsePositive) {
  const std::vector<Annotation> gts = {gt({0, 0, 50, 10, 0})};
  const MatchResult m = match({det(gts[0].box, 0.6), det(gts[0].box, 0.9)}, gts, 0.5);
  EXPECT_EQ(m.flags[1], MatchFlag::kTruePositive);
  EXPECT_EQ(m.flags[0], MatchFlag::kFalsePositive);
}

TEST(Match, TakesHighestIouGt) {
  const std::vector<Annotation> gts = {gt({0, 0, 50, 10, 0}), gt({2, 0, 50, 10, 0})};
  const MatchResult m = match({det({1.9, 0, 50, 10, 0}, 0.9)}, gts, 0.5);
  EXPECT_EQ(m.matched_gt[0], 1);
  EXPECT_EQ(m.false_negatives, 1u);
}

TEST(Match, RandomMatchesGreedyOracle) {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> pos(0.0, 300.0);
  std::uniform_real_distribution<double> jitter(-6.0, 6.0);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  for (int round = 0; round < 50; ++round) {
    std::vector<Annotation> gts;
    for (int g = 0; g < 10; ++g) gts.push_back(gt(canonicalize(pos(rng), pos(rng), 60, 15, score(rng))));
    std::vector<Detection> dets;
    for (int d = 0; d < 20; ++d) {
      const OrientedBox& src = gts[static_cast<std::size_t>(d) % gts.size()].box;
      dets.push_back(det(canonicalize(src.cx + jitter(rng), src.cy + jitter(rng), 60, 15, src.theta), score(rng)));
    }
    const MatchResult m = match(dets, gts, 0.5);
    EXPECT_EQ(m.matched_gt, oracle::brute_match(dets, gts, 0.5));
    const std::vector<EvalImage> images = {{gts, dets}};
    const auto brute = oracle::brute_evaluate(images, LengthBins::standard(), {0.5});
    expect_optional_near(average_precision(images, 0.5), brute.ap.at(0.5), 1e-12);
    std::size_t tp = 0;
    for (MatchFlag f : m.flags) tp += f == MatchFlag::kTruePositive;
    EXPECT_EQ(tp + m.false_negatives, gts.size());
  }
}

TEST(Voc07, Examples) {
  std::vector<PrPoint> flat;
  for (int k = 1; k <= 10; ++k) flat.push_back({k / 10.0, 1.0});
  EXPECT_EQ(voc07_ap(flat), 1.0);

  std::vector<PrPoint> staircase;
  for (int k = 1; k <= 10; ++k) staircase.push_back({k / 10.0, k <= 5 ? 1.0 : 0.5});
  EXPECT_NEAR(voc07_ap(staircase), 8.5 / 11.0, 1e-12);
  EXPECT_NEAR(voc07_ap(staircase), 0.7727, 1e-4);
  EXPECT_EQ(voc07_ap({}), 0.0);
}

TEST(AveragePrecision, SingleDetection) {
  const OrientedBox b{10, 10, 40, 8, 0.2};
  EXPECT_EQ(average_precision({{{gt(b)}, {det(b, 0.7)}}}, 0.5), 1.0);
  EXPECT_EQ(average_precision({{{gt(b)}, {det({500, 500, 40, 8, 0}, 0.7)}}}, 0.5), 0.0);
  EXPECT_FALSE(average_precision({{{}, {det(b, 0.7)}}}, 0.5).has_value());
}

TEST(Evaluate, PerfectDetectionsScoreOneEverywhere) {
  const EvalReport r = evaluate(perfect(holodet::testing::eval_dataset(3)));
  EXPECT_EQ(r.map, 1.0);
  EXPECT_EQ(r.ap50, 1.0);
  EXPECT_EQ(r.ap75, 1.0);
  for (const BinResult& b : r.bins) EXPECT_EQ(b.ap, 1.0) << b.bin.name;
  EXPECT_EQ(r.fp, 0u);
  EXPECT_EQ(r.fn, 0u);
}

TEST(Evaluate, EmptyBinIsAbsent) {
  const OrientedBox b{100, 100, 30, 5, 0};
  const EvalReport r = evaluate({{{gt(b)}, {det(b, 0.9)}}});
  EXPECT_EQ(r.bins[0].ap, 1.0);
  EXPECT_FALSE(r.bins[1].ap.has_value());
  EXPECT_FALSE(r.bins[3].ap.has_value());
  EXPECT_NE(format_report_csv(r).find("AP_hg,NA"), std::string::npos);
}

TEST(Evaluate, DroppingHugeDetectionsOnlyAffectsHugeBin) {
  auto images = perfect(holodet::testing::eval_dataset(4));
  const EvalReport before = evaluate(images);
  for (EvalImage& img : images) {
    std::erase_if(img.dets, [](const Detection& d) { return d.box.w > 800.0; });
  }
  const EvalReport after = evaluate(images);
  EXPECT_EQ(after.bins[3].ap, 0.0);
  for (int b = 0; b < 3; ++b) EXPECT_EQ(after.bins[static_cast<std::size_t>(b)].ap, before.bins[static_cast<std::size_t>(b)].ap);
}

TEST(Evaluate, OutOfBinMatchesAreIgnored) {
  // A large gt and its detection do not touch the short bin; a stray short
  // detection does.
  const std::vector<EvalImage> images = {{{gt({100, 100, 30, 5, 0}), gt({600, 600, 300, 30, 0})},
                                          {det({100, 100, 30, 5, 0}, 0.5), det({600, 600, 300, 30, 0}, 0.9),
                                           det({1500, 1500, 30, 5, 0}, 0.95)}}};
  const LengthBins bins = LengthBins::standard();
  const LengthBin& short_bin = bins.bins[0];
  std::vector<ClassCurve> curves;
  const auto ap = average_precision(images, 0.5, &short_bin, &curves);
  ASSERT_EQ(curves.size(), 1u);
  ASSERT_EQ(curves[0].points.size(), 2u);
  EXPECT_EQ(curves[0].points[0].precision, 0.0);
  EXPECT_EQ(curves[0].points[1].precision, 0.5);
  EXPECT_NEAR(*ap, 0.5, 1e-12);
}

TEST(Evaluate, MatchesBruteForceEvaluator) {
  const auto thresholds = IouSweep{}.thresholds();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto images = holodet::testing::eval_dataset(seed);
    const EvalReport r = evaluate(images);
    const auto brute = oracle::brute_evaluate(images, LengthBins::standard(), thresholds);
    for (const auto& [t, ap] : r.ap_by_threshold) expect_optional_near(ap, brute.ap.at(t), 1e-9);
    expect_optional_near(r.map, brute.map, 1e-9);
    for (std::size_t b = 0; b < r.bins.size(); ++b) expect_optional_near(r.bins[b].ap, brute.bin_ap[b], 1e-9);
  }
}

TEST(Evaluate, ScoreScalingInvariant) {
  auto images = holodet::testing::eval_dataset(7);
  const EvalReport base = evaluate(images);
  for (EvalImage& img : images) {
    for (Detection& d : img.dets) d.score *= 0.37;
  }
  const EvalReport scaled = evaluate(images);
  EXPECT_EQ(format_report_csv(base), format_report_csv(scaled));
}

TEST(Evaluate, AddingCorrectDetectionNeverLowersAp) {
  // Adding a top-scored exact detection of a gt that has no detection yet.
  auto images = holodet::testing::eval_dataset(8);
  const EvalReport base = evaluate(images);
  EvalImage& img = images[0];
  std::optional<std::size_t> missing;
  for (std::size_t g = 0; g < img.gts.size() && !missing; ++g) {
    bool covered = false;
    for (const Detection& d : img.dets) covered |= d.label == img.gts[g].label && rotated_iou(d.box, img.gts[g].box) > 0.3;
    if (!covered) missing = g;
  }
  ASSERT_TRUE(missing.has_value());
  img.dets.push_back(det(img.gts[*missing].box, 1.0, img.gts[*missing].label));
  const EvalReport more = evaluate(images);
  for (std::size_t k = 0; k < base.ap_by_threshold.size(); ++k) {
    EXPECT_GE(*more.ap_by_threshold[k].second, *base.ap_by_threshold[k].second - 1e-12);
  }
  for (std::size_t b = 0; b < base.bins.size(); ++b) EXPECT_GE(*more.bins[b].ap, *base.bins[b].ap - 1e-12);
}

TEST(FormatReport, ContainsHeadlineMetrics) {
  const EvalReport r = evaluate(perfect(holodet::testing::eval_dataset(9, 1)));
  const std::string text = format_report(r);
  EXPECT_NE(text.find("mAP"), std::string::npos);
  EXPECT_NE(text.find("AP_hg"), std::string::npos);
  EXPECT_EQ(format_report(r, false).find("AP_hg"), std::string::npos);
  EXPECT_EQ(format_report_csv(r).rfind("metric,value\n", 0), 0u);
}
