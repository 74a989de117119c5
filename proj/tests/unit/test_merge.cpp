#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "holodet/error.hpp"
#include "holodet/merge.hpp"
#include "random_boxes.hpp"

using namespace holodet;

namespace {

Detection at_layer(const OrientedBox& box, double score, int layer, int window = -1,
                   const std::string& label = "bridge") {
  return {box, score, label, layer, window, window >= 0 ? Frame::kWindow : Frame::kOriginal};
}

}  // namespace

TEST(Remap, Examples) {
  const PyramidPlan plan = plan_pyramid(4096, 4096, 2.0, 1024, 1024);
  const PyramidTiling tilings = tile_pyramid(plan, 200);
  ASSERT_EQ(tilings.size(), 3u);

  const auto identity = remap_to_original({at_layer({100, 120, 40, 8, 0.2}, 0.9, 1, 0)}, tilings);
  EXPECT_EQ(identity[0].box, (OrientedBox{100, 120, 40, 8, 0.2}));
  EXPECT_EQ(identity[0].frame, Frame::kOriginal);

  // Layer 2 window 1 sits at origin (824, 0).
  ASSERT_EQ(tilings[1][1].x0, 824);
  const auto r = remap_to_original({at_layer({100, 100, 40, 8, 0.2}, 0.9, 2, 1)}, tilings);
  EXPECT_EQ(r[0].box, (OrientedBox{1848, 200, 80, 16, 0.2}));
  EXPECT_EQ(r[0].layer, 2);
  EXPECT_EQ(r[0].window, 1);
}

TEST(Remap, InvertsWindowProjection) {
  const PyramidPlan plan = plan_pyramid(6000, 5000, 2.0, 1024, 1024);
  const PyramidTiling tilings = tile_pyramid(plan, 200);
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> coord(0.0, 1024.0);
  for (int m = 1; m <= plan.layer_count(); ++m) {
    for (std::size_t w = 0; w < tilings[static_cast<std::size_t>(m - 1)].size(); ++w) {
      const OrientedBox local = canonicalize(coord(rng), coord(rng), 50, 9, 0.7);
      const Detection back = remap_to_original({at_layer(local, 0.5, m, static_cast<int>(w))}, tilings)[0];
      const TileWindow& win = tilings[static_cast<std::size_t>(m - 1)][w];
      const OrientedBox again = box_to_window(project_box(back.box, plan, m), win);
      EXPECT_NEAR(again.cx, local.cx, 1e-6);
      EXPECT_NEAR(again.cy, local.cy, 1e-6);
      EXPECT_NEAR(again.w, local.w, 1e-6);
      EXPECT_NEAR(again.h, local.h, 1e-6);
    }
  }
}

TEST(Remap, RejectsUnknownProvenance) {
  const PyramidTiling tilings = tile_pyramid(plan_pyramid(2048, 2048, 2.0, 1024, 1024), 200);
  EXPECT_THROW(remap_to_original({at_layer({0, 0, 4, 2, 0}, 0.5, 3, 0)}, tilings), Error);
  EXPECT_THROW(remap_to_original({at_layer({0, 0, 4, 2, 0}, 0.5, 1, 9)}, tilings), Error);
  EXPECT_THROW(remap_to_original({at_layer({0, 0, 4, 2, 0}, 0.5, 1, -1)}, tilings), Error);
}

TEST(ScaleFilter, Examples) {
  const LayerThresholds t;
  const auto kept = scale_filter({at_layer({0, 0, 20, 4, 0}, 0.9, 1), at_layer({0, 0, 20, 4, 0}, 0.9, 2),
                                  at_layer({0, 0, 1448, 40, 0}, 0.9, 1), at_layer({0, 0, 1500, 40, 0}, 0.9, 3),
                                  at_layer({0, 0, 60, 4, 0}, 0.9, 3)},
                                 t);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].layer, 1);
  EXPECT_EQ(kept[1].box.w, 60.0);
}

TEST(GlobalMerge, OverlappingWindowsKeepBest) {
  const OrientedBox a{500, 500, 100, 20, 0.1};
  const OrientedBox b{501, 500, 100, 20, 0.1};
  ASSERT_GT(rotated_iou(a, b), 0.9);
  const auto out = global_merge({at_layer(b, 0.7, 1), at_layer(a, 0.8, 1)}, 0.5);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].score, 0.8);
}

TEST(GlobalMerge, DisjointSurvive) {
  std::vector<Detection> dets;
  for (int k = 0; k < 8; ++k) dets.push_back(at_layer({300.0 * k, 0, 100, 20, 0}, 0.1 + 0.1 * k, 1 + k % 3));
  const auto out = global_merge(dets, 0.5);
  EXPECT_EQ(out.size(), 8u);
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_GE(out[i - 1].score, out[i].score);
}

TEST(GlobalMerge, ClassWise) {
  const OrientedBox a{0, 0, 100, 20, 0};
  const auto out = global_merge({at_layer(a, 0.9, 1, -1, "bridge"), at_layer(a, 0.8, 1, -1, "ship")}, 0.5);
  EXPECT_EQ(out.size(), 2u);
}

TEST(GlobalMerge, PerLayerModeKeepsOneBoxPerLayer) {
  const OrientedBox a{0, 0, 100, 20, 0};
  const std::vector<Detection> dets = {at_layer(a, 0.9, 1), at_layer(a, 0.8, 2), at_layer(a, 0.7, 2)};
  EXPECT_EQ(global_merge(dets, 0.5, MergeMode::kCrossLayerNms).size(), 1u);
  EXPECT_EQ(global_merge(dets, 0.5, MergeMode::kPerLayerNms).size(), 2u);
  EXPECT_EQ(parse_merge_mode("per-layer"), MergeMode::kPerLayerNms);
  EXPECT_EQ(to_string(MergeMode::kCrossLayerNms), "cross-layer");
  EXPECT_THROW(parse_merge_mode("both"), ConfigError);
}

TEST(GlobalMerge, IdempotentSubsetOfInput) {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::uniform_int_distribution<int> layer(1, 3);
  for (int round = 0; round < 20; ++round) {
    std::vector<Detection> dets;
    for (int k = 0; k < 150; ++k) {
      dets.push_back(at_layer(holodet::testing::random_box(rng, 200.0, 60.0), score(rng), layer(rng), -1,
                              k % 4 == 0 ? "ship" : "bridge"));
    }
    for (MergeMode mode : {MergeMode::kCrossLayerNms, MergeMode::kPerLayerNms}) {
      const auto once = global_merge(dets, 0.3, mode);
      EXPECT_EQ(global_merge(once, 0.3, mode), once);
      EXPECT_LE(once.size(), dets.size());
      for (const Detection& d : once) EXPECT_NE(std::find(dets.begin(), dets.end(), d), dets.end());
    }
  }
}
