#include <gtest/gtest.h>

#include <cmath>

#include "hit/geometry.hpp"

namespace hit {
namespace {

// Independent IoU oracle on corner coordinates.
double iou_oracle(double l1, double t1, double w1, double h1, double l2, double t2, double w2, double h2) {
  const double ix = std::max(0.0, std::min(l1 + w1, l2 + w2) - std::max(l1, l2));
  const double iy = std::max(0.0, std::min(t1 + h1, t2 + h2) - std::max(t1, t2));
  const double inter = ix * iy;
  return inter / (w1 * h1 + w2 * h2 - inter);
}

TEST(Iou, OffsetExamples) {
  const auto a = BoundingBox::from_corners(0, 0, 80, 50);
  const auto b = BoundingBox::from_corners(15, 15, 80, 50);
  EXPECT_NEAR(iou(a, b), 2275.0 / 5725.0, 1e-12);
  EXPECT_NEAR(iou(a, b), 0.397, 0.005);
  const auto c = BoundingBox::from_corners(0, 0, 40, 25);
  const auto d = BoundingBox::from_corners(15, 15, 40, 25);
  EXPECT_NEAR(iou(c, d), 250.0 / 1750.0, 1e-12);
  EXPECT_NEAR(iou(c, d), 0.143, 0.005);
}

TEST(Iou, IdentityAndDisjoint) {
  const BoundingBox a{10, 10, 5, 7};
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(iou(a, BoundingBox{100, 100, 5, 7}), 0.0);
  // Touching edges share no area.
  EXPECT_DOUBLE_EQ(iou(a, BoundingBox{15, 10, 5, 7}), 0.0);
}

TEST(HeightIou, IntervalArithmetic) {
  const auto a = BoundingBox::from_corners(0, 0, 10, 10);
  const auto b = BoundingBox::from_corners(3, 5, 10, 10);
  EXPECT_NEAR(height_iou(a, b), 5.0 / 15.0, 1e-12);
  EXPECT_DOUBLE_EQ(height_iou(a, BoundingBox::from_corners(50, 0, 4, 10)), 1.0);
  EXPECT_DOUBLE_EQ(height_iou(a, BoundingBox::from_corners(0, 20, 10, 10)), 0.0);
}

TEST(HmIou, ComposesIouAndHeightIou) {
  const auto a = BoundingBox::from_corners(0, 0, 80, 50);
  const auto b = BoundingBox::from_corners(15, 15, 80, 50);
  EXPECT_NEAR(hm_iou(a, b), (2275.0 / 5725.0) * (35.0 / 65.0), 1e-12);
  // The rounded IoU 0.397 gives 0.2138; the exact product is 0.21397.
  EXPECT_NEAR(hm_iou(a, b), 0.2138, 5e-4);
  EXPECT_DOUBLE_EQ(hm_iou(a, a), 1.0);
}

TEST(ExpansionRatio, ClosedForm) {
  EXPECT_NEAR(expansion_ratio(32, 32, 64, 0.2), std::exp(0.4), 1e-12);
  EXPECT_NEAR(expansion_ratio(64, 64, 64, 0.2), 1.2214027581601699, 1e-12);
  EXPECT_EQ(expansion_ratio(10, 50, 64, 0.0), 1.0);
  // Geometric mean of the two single-box factors.
  EXPECT_NEAR(expansion_ratio(16, 48, 64, 0.2),
              std::sqrt(std::exp(0.2 * 64 / 16.0) * std::exp(0.2 * 64 / 48.0)), 1e-12);
}

TEST(ExpansionRatio, DecreasingInWidth) {
  double prev = expansion_ratio(1, 20, 64, 0.2);
  for (double w = 1.5; w < 64; w += 0.5) {
    const double r = expansion_ratio(w, 20, 64, 0.2);
    EXPECT_LT(r, prev);
    EXPECT_GT(r, 1.0);
    prev = r;
  }
}

TEST(ConsistentIou, SmallBoxesAreExpanded) {
  TrackerConfig cfg;
  const BoundingBox a{100, 100, 32, 64};
  const BoundingBox b{110, 105, 32, 64};
  const double r = std::exp(0.4);
  const double w = 32 * r, h = 64 * r;
  const double expected = iou_oracle(100 - w / 2, 100 - h / 2, w, h, 110 - w / 2, 105 - h / 2, w, h);
  EXPECT_NEAR(consistent_iou(a, b, cfg), expected, 1e-12);
  EXPECT_GT(consistent_iou(a, b, cfg), iou(a, b));
}

TEST(ConsistentIou, LargeOrMixedBoxesUseRawKernel) {
  TrackerConfig cfg;
  const BoundingBox big{100, 100, 100, 60};
  const BoundingBox big2{120, 110, 100, 60};
  EXPECT_DOUBLE_EQ(consistent_iou(big, big2, cfg), iou(big, big2));
  const BoundingBox small{100, 100, 40, 60};
  EXPECT_DOUBLE_EQ(consistent_iou(big, small, cfg), iou(big, small));
}

TEST(ConsistentIou, IdenticalSmallBoxesGiveOne) {
  const BoundingBox a{5, 5, 3, 4};
  EXPECT_DOUBLE_EQ(consistent_iou(a, a, TrackerConfig{}), 1.0);
}

TEST(ConsistentIou, HonoursKernelSwitches) {
  TrackerConfig cfg;
  const BoundingBox a{100, 100, 32, 64};
  const BoundingBox b{110, 105, 32, 64};
  // consistent_iou always expands; enable_ci only switches the kernel.
  cfg.enable_ci = false;
  EXPECT_DOUBLE_EQ(OverlapKernel::from_config(cfg)(a, b), iou(a, b));
  cfg.use_hm_iou = true;
  EXPECT_DOUBLE_EQ(OverlapKernel::from_config(cfg)(a, b), hm_iou(a, b));
  cfg.enable_ci = true;
  const double r = std::exp(0.4);
  EXPECT_NEAR(consistent_iou(a, b, cfg), hm_iou(a.scaled(r), b.scaled(r)), 1e-12);
  const auto kernel = OverlapKernel::from_config(cfg);
  EXPECT_DOUBLE_EQ(kernel(a, b), consistent_iou(a, b, cfg));
  EXPECT_DOUBLE_EQ(kernel.without_expansion()(a, b), hm_iou(a, b));
}

}  // namespace
}  // namespace hit
