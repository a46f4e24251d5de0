#include <gtest/gtest.h>

#include "hit/refine.hpp"
#include "test_util.hpp"

namespace hit {
namespace {

using test::det;
using test::line_track;

Trajectory traj(int id, std::vector<Detection> e) { return {id, std::move(e), Provenance::Native}; }

TEST(Split, BreaksAtEveryMissingFrame) {
  auto e = line_track(1, 6, 0, 0, 1, 0, 10, 20, 0);
  e.erase(e.begin() + 2);
  const auto parts = split_at_discontinuities(std::vector{traj(1, e)});
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].t_min(), 1);
  EXPECT_EQ(parts[0].t_max(), 2);
  EXPECT_EQ(parts[1].t_min(), 4);
  EXPECT_EQ(parts[1].t_max(), 6);
  EXPECT_EQ(parts[0].id(), 0);
  EXPECT_EQ(parts[1].id(), 3);
}

TEST(Split, OrdersAcrossTrajectoriesAndRejectsBadInput) {
  const std::vector<Trajectory> ts = {traj(1, line_track(5, 6, 0, 0, 0, 0, 10, 10, 10)),
                                      traj(2, line_track(1, 2, 0, 0, 0, 0, 10, 10, 20))};
  const auto parts = split_at_discontinuities(ts);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].t_min(), 1);
  EXPECT_THROW(split_at_discontinuities(std::vector{traj(1, {})}), Error);
  auto dup = line_track(1, 2, 0, 0, 0, 0, 10, 10, 0);
  dup[1].frame = 1;
  EXPECT_THROW(split_at_discontinuities(std::vector{traj(1, dup)}), Error);
}

TEST(ResolveOverlap, DisjointIsAUnion) {
  const Tracklet a(5, line_track(1, 3, 0, 0, 0, 0, 10, 10, 0));
  const Tracklet b(9, line_track(6, 8, 0, 0, 0, 0, 10, 10, 10));
  const auto m = resolve_overlap(b, a, 0);
  EXPECT_EQ(m.id(), 5);
  EXPECT_EQ(m.size(), 6u);
}

TEST(ResolveOverlap, SharedFramesPreferScoreThenEarlierTracklet) {
  auto ea = line_track(1, 5, 0, 0, 0, 0, 10, 10, 0);
  auto eb = line_track(4, 8, 0, 0, 0, 0, 10, 10, 100);
  eb[0].score = 0.95;  // frame 4
  const Tracklet a(1, ea), b(2, eb);
  const auto m = resolve_overlap(a, b, 2);
  ASSERT_EQ(m.size(), 8u);
  EXPECT_EQ(m.at_frame(4)->det_id, 100);
  EXPECT_EQ(m.at_frame(5)->det_id, 4);
  EXPECT_EQ(m.id(), 1);
  EXPECT_THROW(resolve_overlap(a, b, 1), Error);
}

TEST(ResolveOverlap, SameStartFallsBackToDetId) {
  const Tracklet a(1, {det(1, 0, 0, 10, 10, 0.5, 7), det(2, 0, 0, 10, 10, 0.5, 9)});
  const Tracklet b(2, {det(1, 0, 0, 10, 10, 0.5, 3)});
  const auto m = resolve_overlap(a, b, 1);
  EXPECT_EQ(m.at_frame(1)->det_id, 3);
}

TEST(Interpolate, FillsLinearly) {
  const auto t = traj(1, {det(1, 0, 0, 10, 20, 0.8, 0), det(5, 8, 4, 14, 20, 0.4, 1)});
  const auto out = interpolate(t, 20);
  ASSERT_EQ(out.entries.size(), 5u);
  for (int k = 1; k <= 3; ++k) {
    const auto& d = out.entries[static_cast<std::size_t>(k)];
    EXPECT_EQ(d.frame, 1 + k);
    EXPECT_DOUBLE_EQ(d.box.cx, 2.0 * k);
    EXPECT_DOUBLE_EQ(d.box.cy, 1.0 * k);
    EXPECT_DOUBLE_EQ(d.box.w, 10.0 + k);
    EXPECT_DOUBLE_EQ(d.score, 0.6);
    EXPECT_TRUE(d.interpolated);
    EXPECT_EQ(d.det_id, -1);
  }
  EXPECT_FALSE(out.entries.front().interpolated);
}

TEST(Interpolate, RespectsMaxGap) {
  const auto t = traj(1, {det(1, 0, 0, 10, 20), det(5, 8, 0, 10, 20)});
  EXPECT_EQ(interpolate(t, 3).entries.size(), 5u);
  EXPECT_EQ(interpolate(t, 2).entries.size(), 2u);
  const auto cont = traj(1, line_track(1, 4, 0, 0, 1, 0, 10, 10, 0));
  EXPECT_EQ(interpolate(cont, 20).entries, cont.entries);
}

TEST(Smooth, ConstantTrackIsFixed) {
  const auto t = traj(1, line_track(1, 30, 50, 60, 0, 0, 20, 40, 0));
  const auto s = gaussian_smooth(t, 5.0);
  for (std::size_t k = 0; k < t.entries.size(); ++k) {
    EXPECT_NEAR(s.entries[k].box.cx, 50.0, 1e-9);
    EXPECT_NEAR(s.entries[k].box.h, 40.0, 1e-9);
  }
}

TEST(Smooth, ZeroSigmaIsIdentity) {
  const auto t = traj(1, line_track(1, 10, 0, 0, 3, 1, 20, 40, 0));
  EXPECT_EQ(gaussian_smooth(t, 0.0).entries, t.entries);
}

TEST(Smooth, LinearInteriorIsPreserved) {
  const auto t = traj(1, line_track(1, 40, 0, 0, 3, -1, 20, 40, 0));
  const auto s = gaussian_smooth(t, 2.0);
  for (std::size_t k = 4; k + 4 < t.entries.size(); ++k) {
    EXPECT_NEAR(s.entries[k].box.cx, t.entries[k].box.cx, 1e-9);
    EXPECT_NEAR(s.entries[k].box.cy, t.entries[k].box.cy, 1e-9);
  }
}

TEST(Smooth, DampsASpikeAndKeepsFrames) {
  auto e = line_track(1, 21, 0, 0, 0, 0, 20, 40, 0);
  e[10].box.cx = 100.0;
  e[10].score = 0.3;
  const auto s = gaussian_smooth(traj(1, e), 2.0);
  EXPECT_LT(s.entries[10].box.cx, 50.0);
  EXPECT_GT(s.entries[10].box.cx, 0.0);
  EXPECT_GT(s.entries[9].box.cx, 0.0);
  for (std::size_t k = 0; k < e.size(); ++k) {
    EXPECT_EQ(s.entries[k].frame, e[k].frame);
    EXPECT_EQ(s.entries[k].score, e[k].score);
  }
}

TEST(Smooth, RunsAreSmoothedSeparately) {
  auto e = line_track(1, 5, 0, 0, 0, 0, 20, 40, 0);
  for (auto d : line_track(8, 12, 500, 0, 0, 0, 20, 40, 10)) e.push_back(d);
  const auto s = gaussian_smooth(traj(1, e), 3.0);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(s.entries[k].box.cx, 0.0, 1e-9);
  for (std::size_t k = 5; k < 10; ++k) EXPECT_NEAR(s.entries[k].box.cx, 500.0, 1e-9);
}

TEST(Smooth, CommutesWithTranslation) {
  auto e = line_track(1, 15, 0, 0, 2, 1, 20, 40, 0);
  e[3].box.cx += 7.0;
  e[9].box.cy -= 4.0;
  auto shifted = e;
  for (auto& d : shifted) d.box = d.box.translated(13.0, -6.0);
  const auto a = gaussian_smooth(traj(1, e), 1.5);
  const auto b = gaussian_smooth(traj(1, shifted), 1.5);
  for (std::size_t k = 0; k < e.size(); ++k) {
    EXPECT_NEAR(a.entries[k].box.cx + 13.0, b.entries[k].box.cx, 1e-9);
    EXPECT_NEAR(a.entries[k].box.cy - 6.0, b.entries[k].box.cy, 1e-9);
  }
}

TEST(Relabel, OrdersByStartThenDetId) {
  std::vector<Trajectory> ts = {traj(9, line_track(5, 6, 0, 0, 0, 0, 1, 1, 3)),
                                traj(4, line_track(1, 2, 0, 0, 0, 0, 1, 1, 8)),
                                traj(7, line_track(1, 2, 0, 0, 0, 0, 1, 1, 5))};
  relabel_trajectories(ts);
  ASSERT_EQ(ts.size(), 3u);
  EXPECT_EQ(ts[0].entries.front().det_id, 5);
  EXPECT_EQ(ts[1].entries.front().det_id, 8);
  EXPECT_EQ(ts[2].entries.front().det_id, 3);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(ts[static_cast<std::size_t>(k)].track_id, k + 1);
}

}  // namespace
}  // namespace hit
