#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "holodet/error.hpp"
#include "holodet/losses.hpp"

using namespace holodet;

TEST(FocalLoss, Examples) {
  EXPECT_LT(focal_loss(1.0 - 1e-9, true), 1e-18);
  EXPECT_NEAR(focal_loss(0.5, true), 0.25 * 0.25 * std::log(2.0), 1e-15);
  EXPECT_NEAR(focal_loss(0.5, true), 0.04332169878499658, 1e-15);
  for (double p : {0.1, 0.4, 0.9}) {
    EXPECT_NEAR(focal_loss(p, true, {1.0, 0.0}), -std::log(p), 1e-15);
    EXPECT_NEAR(focal_loss(p, false, {1.0, 0.0}), -std::log(1.0 - p), 1e-15);
  }
}

TEST(FocalLoss, RejectsBoundaryProbabilities) {
  EXPECT_THROW(focal_loss(0.0, true), Error);
  EXPECT_THROW(focal_loss(1.0, false), Error);
}

TEST(FocalLoss, StrictlyDecreasingInPt) {
  double previous = INFINITY;
  for (int k = 1; k < 1000; ++k) {
    const double value = focal_loss(k / 1000.0, true);
    EXPECT_LT(value, previous);
    previous = value;
  }
}

TEST(SmoothL1, Examples) {
  EXPECT_EQ(smooth_l1(0.0), 0.0);
  EXPECT_EQ(smooth_l1(0.5), 0.125);
  EXPECT_EQ(smooth_l1(3.0), 2.5);
  EXPECT_EQ(smooth_l1(-3.0), 2.5);
  EXPECT_EQ(smooth_l1(1.0), 0.5);
  const std::vector<double> v = {0.5, 3.0, 0.0};
  EXPECT_EQ(smooth_l1(v), 2.625);
}

TEST(TotalLoss, AllPerfectIsZero) {
  const std::vector<LayerLossInput> in = {{{0.0, 0.0}, {{0.0, 3.0}}, 1.0}, {{0.0}, {}, 1.0}};
  EXPECT_EQ(total_loss_oriented(in).total, 0.0);
}

TEST(TotalLoss, WorkedExample) {
  const std::vector<LayerLossInput> in = {{{0.1, 0.3}, {{0.5, 2.0}}, 1.0}};
  const LossBreakdown b = total_loss_oriented(in);
  EXPECT_EQ(b.total, 1.2);
  EXPECT_EQ(b.layers[0].samples, 2u);
  EXPECT_EQ(b.layers[0].positives, 1u);
  EXPECT_EQ(b.layers[0].reg_term, 1.0);
  EXPECT_EQ(total_loss_horizontal(in).total, 0.2 + 0.5);
}

TEST(TotalLoss, NoPositivesContributesNoRegression) {
  const std::vector<LayerLossInput> in = {{{0.2, 0.4}, {}, 1.0}, {{}, {}, 1.0}};
  const LossBreakdown b = total_loss_oriented(in);
  EXPECT_EQ(b.layers[0].reg_term, 0.0);
  EXPECT_NEAR(b.total, 0.3, 1e-15);
  EXPECT_EQ(b.layers[1].total, 0.0);
}

TEST(TotalLoss, TwoIdenticalLayersDouble) {
  const LayerLossInput layer{{0.1, 0.3, 0.7}, {{0.5, 2.0}, {0.25, 1.5}}, 1.0};
  const std::vector<LayerLossInput> one = {layer};
  const std::vector<LayerLossInput> two = {layer, layer};
  EXPECT_EQ(total_loss_oriented(two).total, 2.0 * total_loss_oriented(one).total);
}

namespace {

std::vector<LayerLossInput> random_batch(std::mt19937_64& rng, bool unit_weights) {
  std::uniform_int_distribution<int> count(0, 40);
  std::uniform_real_distribution<double> value(0.0, 3.0);
  std::uniform_int_distribution<int> layers(1, 5);
  std::vector<LayerLossInput> out(static_cast<std::size_t>(layers(rng)));
  for (LayerLossInput& in : out) {
    in.lambda = value(rng);
    const int n = count(rng);
    for (int i = 0; i < n; ++i) in.cls_losses.push_back(value(rng));
    const int positives = n == 0 ? 0 : std::uniform_int_distribution<int>(0, n)(rng);
    for (int i = 0; i < positives; ++i) in.positives.push_back({value(rng), unit_weights ? 1.0 : value(rng)});
  }
  return out;
}

}  // namespace

TEST(TotalLoss, HorizontalEqualsOrientedWithUnitWeights) {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 100; ++k) {
    const auto batch = random_batch(rng, true);
    EXPECT_NEAR(total_loss_horizontal(batch).total, total_loss_oriented(batch).total, 1e-12);
  }
}

TEST(TotalLoss, LinearInLayerWeights) {
  std::mt19937_64 rng(52);
  for (int k = 0; k < 100; ++k) {
    auto batch = random_batch(rng, false);
    const LossBreakdown base = total_loss_oriented(batch);
    for (LayerLossInput& in : batch) in.lambda *= 2.5;
    const LossBreakdown scaled = total_loss_oriented(batch);
    EXPECT_NEAR(scaled.total, 2.5 * base.total, 1e-12 * std::max(1.0, base.total));
  }
}
