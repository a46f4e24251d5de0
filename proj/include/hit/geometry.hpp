#pragma once

#include "hit/config.hpp"
#include "hit/core.hpp"

namespace hit {

/// Intersection over union; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

/// 1-D IoU of the vertical extents [top, bottom].
double height_iou(const BoundingBox& a, const BoundingBox& b);

/// Height-modulated IoU: iou(a, b) * height_iou(a, b).
double hm_iou(const BoundingBox& a, const BoundingBox& b);

/// Shared expansion ratio for two small boxes:
/// sqrt(exp(tau * W / w_i) * exp(tau * W / w_j)).
double expansion_ratio(double w_i, double w_j, double width_threshold, double scaling);

/// Parameters of the box-overlap similarity used for association.
struct OverlapKernel {
  bool use_hm_iou = false;
  bool enable_ci = true;
  double width_threshold = 64.0;
  double scaling = 0.2;

  static OverlapKernel from_config(const TrackerConfig& cfg);
  /// Same base kernel, never expanded.
  OverlapKernel without_expansion() const;

  double base(const BoundingBox& a, const BoundingBox& b) const;
  double operator()(const BoundingBox& a, const BoundingBox& b) const;
};

/// Consistent IoU: when both widths are below the threshold, both boxes are
/// scaled about their own centers by expansion_ratio() before the base kernel
/// is applied. Otherwise the base kernel sees the raw boxes.
double consistent_iou(const BoundingBox& a, const BoundingBox& b, const TrackerConfig& cfg);
double consistent_iou(const BoundingBox& a, const BoundingBox& b, const OverlapKernel& kernel);

}  // namespace hit
