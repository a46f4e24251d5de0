#include <gtest/gtest.h>

#include <random>

#include "hit/geometry.hpp"

namespace hit {
namespace {

BoundingBox random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.0, 300.0), size(2.0, 150.0);
  return {pos(rng), pos(rng), size(rng), size(rng)};
}

TEST(Property, ConsistentIouNeverBelowIou) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> width(8.0, 128.0), scale(0.0, 1.0);
  std::size_t checked = 0;
  for (int k = 0; k < 100000; ++k) {
    const auto a = random_box(rng);
    const auto b = random_box(rng);
    const OverlapKernel kernel{false, true, width(rng), scale(rng)};
    ASSERT_GE(consistent_iou(a, b, kernel), iou(a, b) - 1e-9) << k;
    ++checked;
  }
  EXPECT_EQ(checked, 100000u);
}

TEST(Property, IouIsSymmetricBoundedAndScaleInvariant) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> factor(0.1, 10.0);
  for (int k = 0; k < 20000; ++k) {
    const auto a = random_box(rng);
    const auto b = random_box(rng);
    const double v = iou(a, b);
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    ASSERT_DOUBLE_EQ(v, iou(b, a));
    const double s = factor(rng);
    const BoundingBox as{a.cx * s, a.cy * s, a.w * s, a.h * s};
    const BoundingBox bs{b.cx * s, b.cy * s, b.w * s, b.h * s};
    ASSERT_NEAR(iou(as, bs), v, 1e-9);
    ASSERT_LE(hm_iou(a, b), v + 1e-12);
    ASSERT_NEAR(iou(a.translated(31.0, -7.0), b.translated(31.0, -7.0)), v, 1e-9);
  }
}

TEST(Property, ExpansionRatioIsMonotone) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> w(1.0, 63.0);
  for (int k = 0; k < 10000; ++k) {
    const double a = w(rng), b = w(rng);
    const double r = expansion_ratio(a, b, 64.0, 0.2);
    ASSERT_GE(r, 1.0);
    ASSERT_GE(expansion_ratio(a * 0.9, b, 64.0, 0.2), r);
  }
}

}  // namespace
}  // namespace hit
