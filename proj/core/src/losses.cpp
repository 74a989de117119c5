#include "holodet/losses.hpp"

#include <cmath>

#include "holodet/error.hpp"

namespace holodet {

double focal_loss(double p, bool is_positive, FocalParams params) {
  if (!(p > 0.0 && p < 1.0)) throw Error("focal_loss: probability must lie in (0, 1)");
  const double pt = is_positive ? p : 1.0 - p;
  return -params.alpha * std::pow(1.0 - pt, params.gamma) * std::log(pt);
}

double smooth_l1(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

double smooth_l1(std::span<const double> residuals) {
  double sum = 0.0;
  for (double r : residuals) sum += smooth_l1(r);
  return sum;
}

namespace {

LossBreakdown assemble(std::span<const LayerLossInput> layers, bool use_weights) {
  LossBreakdown out;
  for (const LayerLossInput& in : layers) {
    LayerLossTerms t;
    t.lambda = in.lambda;
    t.samples = in.cls_losses.size();
    t.positives = in.positives.size();
    for (double c : in.cls_losses) t.cls_sum += c;
    for (const PositiveTerm& p : in.positives) {
      t.reg_sum += use_weights ? p.w_reg * p.reg_loss : p.reg_loss;
    }
    t.cls_term = t.samples > 0 ? t.cls_sum / static_cast<double>(t.samples) : 0.0;
    t.reg_term = t.positives > 0 ? t.reg_sum / static_cast<double>(t.positives) : 0.0;
    t.total = t.lambda * (t.cls_term + t.reg_term);
    out.total += t.total;
    out.layers.push_back(t);
  }
  return out;
}

}  // namespace

LossBreakdown total_loss_oriented(std::span<const LayerLossInput> layers) {
  return assemble(layers, true);
}

LossBreakdown total_loss_horizontal(std::span<const LayerLossInput> layers) {
  return assemble(layers, false);
}

}  // namespace holodet
