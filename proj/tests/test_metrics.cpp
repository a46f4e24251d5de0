#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "hit/geometry.hpp"
#include "hit/metrics.hpp"
#include "test_util.hpp"

namespace hit {
namespace {

using test::line_track;

Trajectory traj(int id, std::vector<Detection> e) { return {id, std::move(e), Provenance::Native}; }

std::vector<Trajectory> scene() {
  return {traj(1, line_track(1, 10, 100, 100, 2, 0, 40, 80, 0)),
          traj(2, line_track(3, 12, 400, 100, -1, 1, 40, 80, 100)),
          traj(3, line_track(1, 6, 700, 300, 0, 0, 40, 80, 200))};
}

TEST(Clear, PerfectPrediction) {
  const auto gt = scene();
  const auto c = clear_mot(gt, gt);
  EXPECT_EQ(c.gt_count, 26u);
  EXPECT_EQ(c.matches, 26u);
  EXPECT_EQ(c.false_positives + c.false_negatives + c.id_switches, 0u);
  EXPECT_DOUBLE_EQ(c.mota(), 1.0);
  const auto id = id_metrics(gt, gt);
  EXPECT_EQ(id.idtp, 26u);
  EXPECT_DOUBLE_EQ(id.idf1(), 1.0);
}

TEST(Clear, EmptyInputs) {
  const std::vector<Trajectory> none;
  const auto gt = scene();
  EXPECT_DOUBLE_EQ(clear_mot(none, none).mota(), 1.0);
  EXPECT_DOUBLE_EQ(clear_mot(none, gt).mota(), 0.0);
  const auto c = clear_mot(gt, none);
  EXPECT_EQ(c.false_negatives, 26u);
  EXPECT_DOUBLE_EQ(c.mota(), 0.0);
  EXPECT_DOUBLE_EQ(id_metrics(gt, none).idf1(), 0.0);
  EXPECT_DOUBLE_EQ(id_metrics(none, none).idf1(), 0.0);
}

TEST(Clear, SplitTrackCostsOneSwitch) {
  const auto e = line_track(1, 10, 100, 100, 2, 0, 40, 80, 0);
  const std::vector gt = {traj(1, e)};
  const std::vector pred = {traj(1, {e.begin(), e.begin() + 5}), traj(2, {e.begin() + 5, e.end()})};
  const auto c = clear_mot(gt, pred);
  EXPECT_EQ(c.id_switches, 1u);
  EXPECT_DOUBLE_EQ(c.mota(), 0.9);
  const auto id = id_metrics(gt, pred);
  EXPECT_EQ(id.idtp, 5u);
  EXPECT_EQ(id.idfp, 5u);
  EXPECT_EQ(id.idfn, 5u);
  EXPECT_DOUBLE_EQ(id.idf1(), 0.5);
}

TEST(Clear, SwitchIsCountedAcrossAGap) {
  const auto e = line_track(1, 10, 100, 100, 2, 0, 40, 80, 0);
  const std::vector gt = {traj(1, e)};
  std::vector<Detection> a(e.begin(), e.begin() + 4), b(e.begin() + 6, e.end());
  EXPECT_EQ(clear_mot(gt, std::vector{traj(1, a), traj(2, b)}).id_switches, 1u);
  std::vector<Detection> same = a;
  same.insert(same.end(), b.begin(), b.end());
  const auto c = clear_mot(gt, std::vector{traj(1, same)});
  EXPECT_EQ(c.id_switches, 0u);
  EXPECT_EQ(c.false_negatives, 2u);
}

TEST(Clear, FalsePositivesAndThreshold) {
  const auto e = line_track(1, 4, 100, 100, 0, 0, 40, 80, 0);
  auto shifted = e;
  for (auto& d : shifted) d.box = d.box.translated(15.0, 0.0);  // IoU 25/55 < 0.5
  const auto c = clear_mot(std::vector{traj(1, e)}, std::vector{traj(1, shifted)});
  EXPECT_EQ(c.false_positives, 4u);
  EXPECT_EQ(c.false_negatives, 4u);
  EXPECT_DOUBLE_EQ(c.mota(), -1.0);
  const auto loose = clear_mot(std::vector{traj(1, e)}, std::vector{traj(1, shifted)}, 0.4);
  EXPECT_EQ(loose.matches, 4u);
}

TEST(Clear, InvariantToTrajectoryOrderAndIdValues) {
  const auto gt = scene();
  auto pred = scene();
  for (auto& t : pred)
    for (auto& d : t.entries) d.box = d.box.translated(3.0, -2.0);
  pred[1].entries.erase(pred[1].entries.begin() + 4);
  const auto base = evaluate_sequence("s", gt, pred);
  std::reverse(pred.begin(), pred.end());
  for (auto& t : pred) t.track_id += 40;
  const auto perm = evaluate_sequence("s", gt, pred);
  EXPECT_EQ(base.clear.matches, perm.clear.matches);
  EXPECT_EQ(base.clear.id_switches, perm.clear.id_switches);
  EXPECT_EQ(base.id.idtp, perm.id.idtp);
}

// Exhaustive identity assignment for small inputs.
std::size_t brute_force_idtp(const std::vector<Trajectory>& gt, const std::vector<Trajectory>& pred) {
  std::vector<std::vector<std::size_t>> ov(gt.size(), std::vector<std::size_t>(pred.size(), 0));
  for (std::size_t i = 0; i < gt.size(); ++i)
    for (std::size_t j = 0; j < pred.size(); ++j)
      for (const auto& a : gt[i].entries)
        for (const auto& b : pred[j].entries)
          if (a.frame == b.frame && iou(a.box, b.box) >= 0.5) ++ov[i][j];
  std::size_t best = 0;
  std::vector<int> choice(gt.size(), -1);
  std::vector<bool> used(pred.size(), false);
  auto rec = [&](auto&& self, std::size_t i, std::size_t acc) -> void {
    if (i == gt.size()) {
      best = std::max(best, acc);
      return;
    }
    self(self, i + 1, acc);
    for (std::size_t j = 0; j < pred.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      self(self, i + 1, acc + ov[i][j]);
      used[j] = false;
    }
  };
  rec(rec, 0, 0);
  return best;
}

TEST(IdMetrics, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n_gt = 1 + static_cast<int>(rng() % 5);
    std::vector<Trajectory> gt;
    for (int k = 0; k < n_gt; ++k)
      gt.push_back(traj(k + 1, line_track(1, 12, 100.0 + 90.0 * k, 100, 0, 0, 40, 80, 100 * k)));
    // Prediction fragments: random cuts of GT tracks with random labels.
    std::vector<std::vector<Detection>> by_label(1 + rng() % 6);
    for (const auto& g : gt) {
      std::size_t start = 0;
      while (start < g.entries.size()) {
        const std::size_t len = 1 + rng() % 6;
        auto& bucket = by_label[rng() % by_label.size()];
        for (std::size_t k = start; k < std::min(start + len, g.entries.size()); ++k) {
          const auto& d = g.entries[k];
          const bool taken = std::any_of(bucket.begin(), bucket.end(),
                                         [&](const Detection& x) { return x.frame == d.frame; });
          if (!taken && rng() % 5 != 0) bucket.push_back(d);
        }
        start += len;
      }
    }
    std::vector<Trajectory> pred;
    for (std::size_t l = 0; l < by_label.size(); ++l) {
      if (by_label[l].empty()) continue;
      std::sort(by_label[l].begin(), by_label[l].end(), detection_less);
      pred.push_back(traj(static_cast<int>(l) + 1, by_label[l]));
    }
    const auto id = id_metrics(gt, pred);
    EXPECT_EQ(id.idtp, brute_force_idtp(gt, pred)) << trial;
    EXPECT_EQ(id.idtp + id.idfn, test::total_entries(gt));
    EXPECT_EQ(id.idtp + id.idfp, test::total_entries(pred));
  }
}

TEST(Report, SummarizesAndFormats) {
  const auto gt = scene();
  auto a = evaluate_sequence("A", gt, gt);
  auto b = evaluate_sequence("B", gt, std::vector<Trajectory>{});
  const auto r = summarize({a, b});
  EXPECT_EQ(r.clear.gt_count, 52u);
  EXPECT_DOUBLE_EQ(r.mota(), 0.5);
  EXPECT_NEAR(r.idf1(), 2.0 * 26 / (2.0 * 26 + 26), 1e-12);
  const auto text = format_report_text(r);
  EXPECT_NE(text.find("COMBINED"), std::string::npos);
  EXPECT_NE(text.find("100.00"), std::string::npos);
  const auto kv = format_report_kv(r);
  EXPECT_NE(kv.find("seq=A mota=1.000000 idf1=1.000000"), std::string::npos);
  EXPECT_NE(kv.find("seq=COMBINED mota=0.500000"), std::string::npos);
}

}  // namespace
}  // namespace hit
