#include "hit/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace hit {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double height_iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (inter <= 0.0) return 0.0;
  const double uni = std::max(a.bottom(), b.bottom()) - std::min(a.top(), b.top());
  return std::clamp(inter / uni, 0.0, 1.0);
}

double hm_iou(const BoundingBox& a, const BoundingBox& b) { return iou(a, b) * height_iou(a, b); }

double expansion_ratio(double w_i, double w_j, double width_threshold, double scaling) {
  // sqrt(e^x * e^y) == e^((x + y) / 2), without overflowing the intermediate product.
  return std::exp(scaling * (width_threshold / w_i + width_threshold / w_j) / 2.0);
}

OverlapKernel OverlapKernel::from_config(const TrackerConfig& cfg) {
  return {cfg.use_hm_iou, cfg.enable_ci, cfg.ci_width_threshold, cfg.ci_scaling_factor};
}

OverlapKernel OverlapKernel::without_expansion() const {
  OverlapKernel k = *this;
  k.enable_ci = false;
  return k;
}

double OverlapKernel::base(const BoundingBox& a, const BoundingBox& b) const {
  return use_hm_iou ? hm_iou(a, b) : iou(a, b);
}

double OverlapKernel::operator()(const BoundingBox& a, const BoundingBox& b) const {
  return enable_ci ? consistent_iou(a, b, *this) : base(a, b);
}

double consistent_iou(const BoundingBox& a, const BoundingBox& b, const OverlapKernel& kernel) {
  if (a.w < kernel.width_threshold && b.w < kernel.width_threshold) {
    const double r = expansion_ratio(a.w, b.w, kernel.width_threshold, kernel.scaling);
    return kernel.base(a.scaled(r), b.scaled(r));
  }
  return kernel.base(a, b);
}

double consistent_iou(const BoundingBox& a, const BoundingBox& b, const TrackerConfig& cfg) {
  return consistent_iou(a, b, OverlapKernel::from_config(cfg));
}

}  // namespace hit
