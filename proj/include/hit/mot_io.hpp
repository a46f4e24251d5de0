#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hit/core.hpp"
#include "hit/refine.hpp"

namespace hit {

/// Malformed input, located by file and 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::filesystem::path& path, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ReadStats {
  std::size_t records = 0;
  std::size_t rejected = 0;  // well-formed but invalid (non-positive size, ...)
  std::size_t skipped = 0;   // filtered out (class filter, DontCare, ignore flag)
};

struct SequenceBundle {
  std::string name;
  FrameIndex frame_count = 0;
  std::vector<Detection> detections;
  std::optional<std::vector<Trajectory>> ground_truth;
  std::optional<double> frame_rate;
  ReadStats stats;
};

/// MOTChallenge detections: `frame,id,bb_left,bb_top,w,h,conf[,x,y,z]`.
/// The id column is ignored; det_ids follow line order.
SequenceBundle read_mot_detections(const std::filesystem::path& path);

/// MOTChallenge tracks (results or ground truth) grouped by id. Rows with a
/// 0 in the conf column of a ground-truth file (`ground_truth = true`) are
/// ignore-regions and are skipped.
std::vector<Trajectory> read_mot_tracks(const std::filesystem::path& path, bool ground_truth = false,
                                        ReadStats* stats = nullptr);

/// `frame,track_id,bb_left,bb_top,w,h,conf,-1,-1,-1` sorted by (frame, track_id).
void write_mot_results(const std::vector<Trajectory>& trajectories,
                       const std::filesystem::path& path);

/// `frame,-1,bb_left,bb_top,w,h,conf,-1,-1,-1` sorted by (frame, det_id).
void write_mot_detections(const std::vector<Detection>& detections,
                          const std::filesystem::path& path);

/// Numeric formatting shared by the writers: fixed six decimals with
/// trailing zeros trimmed.
std::string format_number(double value);

/// KITTI object classes in label-file order; class_id indexes this list.
const std::vector<std::string>& kitti_classes();
/// class id of a KITTI type string, or -1.
int kitti_class_id(const std::string& type);

/// 3-D label fields carried through unchanged (truncated, occluded, alpha, h,
/// w, l, X, Y, Z, ry), keyed by det_id.
using KittiExtras = std::map<DetectionId, std::vector<std::string>>;

struct KittiSequence {
  SequenceBundle bundle;
  std::vector<int> track_ids;  // per detection, parallel to bundle.detections
  KittiExtras extras;
};

/// KITTI tracking labels `frame track_id type truncated occluded alpha x1 y1 x2
/// y2 h w l X Y Z ry [score]`. Frames are 0-based on disk and 1-based in
/// memory. An empty `class_filter` keeps every known class; DontCare rows are
/// always skipped; unknown types are skipped and counted.
KittiSequence read_kitti_tracking(const std::filesystem::path& path,
                                  const std::string& class_filter = {});

/// Trajectories with KITTI 3-D fields from `extras` when present, otherwise the
/// placeholder values (-1 -1 -10 ... -1000 -1000 -1000 -10).
void write_kitti_tracking(const std::vector<Trajectory>& trajectories,
                          const std::filesystem::path& path, const KittiExtras& extras = {});

/// Ground-truth tracks from a KITTI label file.
std::vector<Trajectory> kitti_tracks(const KittiSequence& sequence);

}  // namespace hit
