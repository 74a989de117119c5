#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace holodet {

struct FocalParams {
  double alpha = 0.25;
  double gamma = 2.0;
};

/// -alpha * (1 - p_t)^gamma * ln(p_t), p_t = p for positives and 1 - p
/// otherwise. Throws Error unless 0 < p < 1.
double focal_loss(double p, bool is_positive, FocalParams params = {});

double smooth_l1(double x);

/// Sum of smooth_l1 over a residual vector.
double smooth_l1(std::span<const double> residuals);

struct PositiveTerm {
  double reg_loss = 0.0;
  double w_reg = 1.0;
};

/// Loss inputs for one pyramid layer. `cls_losses` covers every sample
/// (N of them); `positives` the N+ positive ones.
struct LayerLossInput {
  std::vector<double> cls_losses;
  std::vector<PositiveTerm> positives;
  double lambda = 1.0;
};

struct LayerLossTerms {
  double lambda = 1.0;
  double cls_sum = 0.0;
  double reg_sum = 0.0;
  std::size_t samples = 0;    // N
  std::size_t positives = 0;  // N+
  double cls_term = 0.0;      // cls_sum / N, 0 when N = 0
  double reg_term = 0.0;      // reg_sum / N+, 0 when N+ = 0
  double total = 0.0;         // lambda * (cls_term + reg_term)
};

struct LossBreakdown {
  std::vector<LayerLossTerms> layers;
  double total = 0.0;
};

/// Oriented-task total: regression terms weighted by each sample's w_reg.
LossBreakdown total_loss_oriented(std::span<const LayerLossInput> layers);

/// Horizontal-task total: same assembly with every w_reg ignored.
LossBreakdown total_loss_horizontal(std::span<const LayerLossInput> layers);

}  // namespace holodet
