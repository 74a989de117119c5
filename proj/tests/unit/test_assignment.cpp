#include <gtest/gtest.h>

#include <random>

#include "holodet/assignment.hpp"

using namespace holodet;

namespace {

Annotation label_with_length(double length, double cx = 2000, double cy = 2000) {
  return {canonicalize(cx, cy, length, std::max(1.0, length / 5.0), 0.3), "bridge", 0};
}

std::vector<int> layers_of(const LayerAssignment& a, std::size_t source) {
  std::vector<int> out;
  for (const LayerGroup& g : a.layers) {
    for (const AssignedLabel& l : g.labels) {
      if (l.source == source) out.push_back(g.layer);
    }
  }
  return out;
}

}  // namespace

TEST(LayerThresholds, Bands) {
  const LayerThresholds t;
  EXPECT_EQ(t.min_for(1), 15.0);
  EXPECT_EQ(t.min_for(2), 30.0);
  EXPECT_EQ(t.min_for(3), 60.0);
  EXPECT_EQ(t.max_for(3), 1448.0);
  EXPECT_TRUE(t.admits(1, 15.0));
  EXPECT_FALSE(t.admits(1, 1448.0));
}

TEST(AssignToLayers, Examples) {
  const PyramidPlan plan = plan_pyramid(4096, 4096, 2.0, 1024, 1024);
  ASSERT_EQ(plan.layer_count(), 3);
  const auto a = assign_to_layers({label_with_length(20), label_with_length(1447), label_with_length(10),
                                   label_with_length(2000)},
                                  plan, {});
  EXPECT_EQ(layers_of(a, 0), std::vector<int>({1}));
  EXPECT_EQ(layers_of(a, 1), std::vector<int>({1, 2, 3}));
  EXPECT_TRUE(layers_of(a, 2).empty());
  ASSERT_EQ(a.dropped.size(), 2u);
  EXPECT_EQ(a.dropped[0].source, 2u);
  EXPECT_EQ(a.dropped[0].reason, DroppedLabel::Reason::kTooShort);
  EXPECT_EQ(a.dropped[1].reason, DroppedLabel::Reason::kTooLong);
}

TEST(AssignToLayers, ProjectsIntoLayerFrame) {
  const PyramidPlan plan = plan_pyramid(4096, 4096, 2.0, 1024, 1024);
  const auto a = assign_to_layers({label_with_length(400, 800, 800)}, plan, {});
  const AssignedLabel& l3 = a.layers[2].labels.at(0);
  EXPECT_EQ(l3.projected.box.cx, 200.0);
  EXPECT_EQ(l3.projected.box.w, 100.0);
  EXPECT_EQ(l3.original.box.w, 400.0);
}

TEST(AssignToLayers, MatchesIntervalCheckOnRandomLengths) {
  const PyramidPlan plan = plan_pyramid(16384, 16384, 2.0, 1024, 1024);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> length(2.0, 3000.0);
  std::vector<Annotation> labels;
  for (int k = 0; k < 10000; ++k) labels.push_back(label_with_length(length(rng)));
  const auto a = assign_to_layers(labels, plan, {});

  std::vector<std::vector<int>> got(labels.size());
  for (const LayerGroup& g : a.layers) {
    for (const AssignedLabel& l : g.labels) got[l.source].push_back(g.layer);
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double len = labels[i].box.w;
    std::vector<int> expected;
    for (int m = 1; m <= plan.layer_count(); ++m) {
      double lo = 15.0;
      for (int k = 1; k < m; ++k) lo *= 2.0;
      if (len >= lo && len < 1448.0) expected.push_back(m);
    }
    ASSERT_EQ(got[i], expected) << "length " << len;
    if (len >= 15.0 && len < 1448.0) EXPECT_FALSE(expected.empty());
  }
}

TEST(AssignToWindows, SingleWindow) {
  const PyramidPlan plan = plan_pyramid(1024, 1024, 2.0, 1024, 1024);
  const auto a = assign_to_layers({label_with_length(100, 512, 512)}, plan, {});
  const auto wins = tile_layer(plan, 1, 200);
  const auto w = assign_to_windows(a.layers[0], wins);
  ASSERT_EQ(w.per_window[0].size(), 1u);
  EXPECT_EQ(w.per_window[0][0].label.box.center(), (Point{512, 512}));
  EXPECT_TRUE(w.unattached.empty());
}

TEST(AssignToWindows, OverlapRegionAttachesToEveryWindow) {
  const PyramidPlan plan = plan_pyramid(2048, 2048, 2.0, 1024, 1024);
  const auto a = assign_to_layers({label_with_length(100, 900, 900)}, plan, {});
  const auto wins = tile_layer(plan, 1, 200);
  const auto w = assign_to_windows(a.layers[0], wins);
  // Origins per axis are {0, 824, 1024}; 900 lies in the first two.
  std::size_t attached = 0;
  for (std::size_t i = 0; i < wins.size(); ++i) {
    const bool expect = wins[i].x0 <= 824 && wins[i].y0 <= 824;
    EXPECT_EQ(w.per_window[i].size(), expect ? 1u : 0u) << "window " << i;
    attached += w.per_window[i].size();
  }
  EXPECT_EQ(attached, 4u);
  EXPECT_EQ(w.per_window[4][0].label.box.center(), (Point{76, 76}));
}

TEST(AssignToWindows, EveryCenterAttachesAndBackProjects) {
  const PyramidPlan plan = plan_pyramid(5000, 7000, 2.0, 1024, 1024);
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> x(0.0, 7000.0);
  std::uniform_real_distribution<double> y(0.0, 5000.0);
  std::uniform_real_distribution<double> length(15.0, 1447.0);
  std::vector<Annotation> labels;
  for (int k = 0; k < 400; ++k) labels.push_back(label_with_length(length(rng), x(rng), y(rng)));
  const auto a = assign_to_layers(labels, plan, {});
  for (const LayerGroup& g : a.layers) {
    const auto wins = tile_layer(plan, g.layer, 200);
    const auto w = assign_to_windows(g, wins);
    EXPECT_TRUE(w.unattached.empty());
    for (std::size_t i = 0; i < wins.size(); ++i) {
      for (const WindowLabel& wl : w.per_window[i]) {
        const OrientedBox back = unproject_box(box_from_window(wl.label.box, wins[i]), plan, g.layer);
        const OrientedBox& src = labels[wl.source].box;
        EXPECT_NEAR(back.cx, src.cx, 1e-6);
        EXPECT_NEAR(back.cy, src.cy, 1e-6);
        EXPECT_NEAR(back.w, src.w, 1e-6);
        EXPECT_NEAR(back.h, src.h, 1e-6);
        EXPECT_NEAR(back.theta, src.theta, 1e-12);
      }
    }
  }
}
