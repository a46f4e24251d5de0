#include <gtest/gtest.h>

#include "hit/mot_io.hpp"
#include "test_util.hpp"

namespace hit {
namespace {

using test::read_text;
using test::TempDir;
using test::write_text;

TEST(MotRead, CornerToCenter) {
  TempDir dir;
  write_text(dir / "seq.txt", "1,-1,10,20,30,40,0.9\n");
  const auto b = read_mot_detections(dir / "seq.txt");
  ASSERT_EQ(b.detections.size(), 1u);
  const auto& d = b.detections[0];
  EXPECT_DOUBLE_EQ(d.box.cx, 25.0);
  EXPECT_DOUBLE_EQ(d.box.cy, 40.0);
  EXPECT_DOUBLE_EQ(d.box.w, 30.0);
  EXPECT_DOUBLE_EQ(d.box.h, 40.0);
  EXPECT_DOUBLE_EQ(d.score, 0.9);
  EXPECT_EQ(d.det_id, 0);
  EXPECT_EQ(b.name, "seq");
  EXPECT_EQ(b.frame_count, 1);
}

TEST(MotRead, EmptyFileAndBlankLines) {
  TempDir dir;
  write_text(dir / "e.txt", "");
  EXPECT_TRUE(read_mot_detections(dir / "e.txt").detections.empty());
  write_text(dir / "b.txt", "\n  \n3,-1,0,0,5,5,1,-1,-1,-1\n\n");
  const auto b = read_mot_detections(dir / "b.txt");
  EXPECT_EQ(b.detections.size(), 1u);
  EXPECT_EQ(b.frame_count, 3);
}

TEST(MotRead, MalformedRowNamesTheLine) {
  TempDir dir;
  write_text(dir / "bad.txt", "1,-1,0,0,5,5,0.5\n2,-1,0,0,5\n");
  try {
    read_mot_detections(dir / "bad.txt");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("bad.txt:2:"), std::string::npos);
  }
  write_text(dir / "nan.txt", "1,-1,abc,0,5,5,0.5\n");
  EXPECT_THROW(read_mot_detections(dir / "nan.txt"), ParseError);
  write_text(dir / "frame0.txt", "0,-1,0,0,5,5,0.5\n");
  EXPECT_THROW(read_mot_detections(dir / "frame0.txt"), ParseError);
  write_text(dir / "nofile.txt", "");
  EXPECT_THROW(read_mot_detections(dir / "missing.txt"), Error);
}

TEST(MotRead, RejectsDegenerateBoxesAndClampsScores) {
  TempDir dir;
  write_text(dir / "s.txt", "1,-1,0,0,0,5,0.5\n1,-1,0,0,5,-2,0.5\n1,-1,0,0,5,5,7\n1,-1,0,0,5,5,-1\n");
  const auto b = read_mot_detections(dir / "s.txt");
  EXPECT_EQ(b.stats.records, 4u);
  EXPECT_EQ(b.stats.rejected, 2u);
  ASSERT_EQ(b.detections.size(), 2u);
  EXPECT_EQ(b.detections[0].score, 1.0);
  EXPECT_EQ(b.detections[1].score, 0.0);
  EXPECT_EQ(b.detections[1].det_id, 1);
}

TEST(MotTracks, GroupsAndSkipsIgnoredGroundTruth) {
  TempDir dir;
  write_text(dir / "gt.txt", "2,5,0,0,10,10,1,1,1\n1,5,0,0,10,10,1,1,1\n1,3,50,0,10,10,0,1,1\n");
  const auto all = read_mot_tracks(dir / "gt.txt");
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].track_id, 3);
  EXPECT_EQ(all[1].entries.size(), 2u);
  EXPECT_EQ(all[1].entries[0].frame, 1);
  ReadStats stats;
  const auto gt = read_mot_tracks(dir / "gt.txt", true, &stats);
  ASSERT_EQ(gt.size(), 1u);
  EXPECT_EQ(stats.skipped, 1u);
  write_text(dir / "dup.txt", "1,5,0,0,10,10,1\n1,5,3,0,10,10,1\n");
  EXPECT_THROW(read_mot_tracks(dir / "dup.txt"), ParseError);
}

TEST(MotWrite, RoundTripIsByteIdentical) {
  TempDir dir;
  const std::string text =
      "1,1,10.5,20,30,40,0.9,-1,-1,-1\n"
      "1,2,100,200,31.25,62.5,0.75,-1,-1,-1\n"
      "2,1,11,20,30,40,0.8,-1,-1,-1\n";
  write_text(dir / "a.txt", text);
  const auto tracks = read_mot_tracks(dir / "a.txt");
  write_mot_results(tracks, dir / "b.txt");
  EXPECT_EQ(read_text(dir / "b.txt"), text);
}

TEST(MotWrite, SortsByFrameThenId) {
  TempDir dir;
  std::vector<Trajectory> ts = {{2, {test::det(1, 5, 5, 2, 2), test::det(2, 5, 5, 2, 2)}, Provenance::Native},
                                {1, {test::det(2, 9, 9, 2, 2)}, Provenance::Native}};
  write_mot_results(ts, dir / "o.txt");
  EXPECT_EQ(read_text(dir / "o.txt"),
            "1,2,4,4,2,2,0.9,-1,-1,-1\n2,1,8,8,2,2,0.9,-1,-1,-1\n2,2,4,4,2,2,0.9,-1,-1,-1\n");
}

TEST(MotWrite, DetectionsRoundTrip) {
  TempDir dir;
  write_text(dir / "d.txt", "1,-1,1,2,3,4,0.5,-1,-1,-1\n2,-1,5,6,7,8,0.25,-1,-1,-1\n");
  const auto b = read_mot_detections(dir / "d.txt");
  write_mot_detections(b.detections, dir / "e.txt");
  EXPECT_EQ(read_text(dir / "e.txt"), read_text(dir / "d.txt"));
}

TEST(FormatNumber, TrimsZeros) {
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(1.5), "1.5");
  EXPECT_EQ(format_number(-0.0000001), "0");
  EXPECT_EQ(format_number(0.1234564), "0.123456");
  EXPECT_EQ(format_number(-12.25), "-12.25");
}

const char* kKitti =
    "0 1 Car 0 0 -1.5 100 50 200 150 1.5 1.6 3.9 1 2 10 0.1\n"
    "0 -1 DontCare -1 -1 -10 0 0 10 10 -1 -1 -1 -1000 -1000 -1000 -10\n"
    "1 1 Car 0 1 -1.4 105 50 205 150 1.5 1.6 3.9 1.1 2 10 0.1\n"
    "1 2 Pedestrian 0 0 0.3 400 80 430 160 1.7 0.6 0.8 3 2 12 0.2\n"
    "1 3 Spaceship 0 0 0.3 400 80 430 160 1.7 0.6 0.8 3 2 12 0.2\n";

TEST(Kitti, ReadsAndFilters) {
  TempDir dir;
  write_text(dir / "0000.txt", kKitti);
  const auto seq = read_kitti_tracking(dir / "0000.txt");
  ASSERT_EQ(seq.bundle.detections.size(), 3u);
  EXPECT_EQ(seq.bundle.stats.skipped, 2u);
  const auto& d = seq.bundle.detections[0];
  EXPECT_EQ(d.frame, 1);
  EXPECT_DOUBLE_EQ(d.box.cx, 150.0);
  EXPECT_DOUBLE_EQ(d.box.h, 100.0);
  EXPECT_EQ(d.class_id, kitti_class_id("Car"));
  EXPECT_EQ(seq.bundle.detections[2].class_id, kitti_class_id("Pedestrian"));
  EXPECT_EQ(seq.track_ids, (std::vector<int>{1, 1, 2}));
  EXPECT_EQ(seq.bundle.frame_count, 2);

  const auto cars = read_kitti_tracking(dir / "0000.txt", "Car");
  EXPECT_EQ(cars.bundle.detections.size(), 2u);
  const auto tracks = kitti_tracks(cars);
  ASSERT_EQ(tracks.size(), 1u);
  EXPECT_EQ(tracks[0].entries.size(), 2u);
}

TEST(Kitti, MalformedRow) {
  TempDir dir;
  write_text(dir / "bad.txt", "0 1 Car 0 0\n");
  EXPECT_THROW(read_kitti_tracking(dir / "bad.txt"), ParseError);
}

TEST(Kitti, WriteCarriesExtrasAndPlaceholders) {
  TempDir dir;
  write_text(dir / "in.txt", "0 1 Car 0 0 -1.5 100 50 200 150 1.5 1.6 3.9 1 2 10 0.1\n");
  const auto seq = read_kitti_tracking(dir / "in.txt");
  auto tracks = kitti_tracks(seq);
  tracks[0].track_id = 4;
  write_kitti_tracking(tracks, dir / "out.txt", seq.extras);
  EXPECT_EQ(read_text(dir / "out.txt"), "0 4 Car 0 0 -1.5 100 50 200 150 1.5 1.6 3.9 1 2 10 0.1 1\n");
  write_kitti_tracking(tracks, dir / "plain.txt");
  EXPECT_EQ(read_text(dir / "plain.txt"),
            "0 4 Car -1 -1 -10 100 50 200 150 -1 -1 -1 -1000 -1000 -1000 -10 1\n");
}

}  // namespace
}  // namespace hit
