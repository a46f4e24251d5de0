#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hit {

using FrameIndex = int;
using DetectionId = std::int64_t;
using TrackletId = std::int64_t;

/// Raised on any violated precondition or malformed input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned box in center form. External formats use corner form; convert
/// at the I/O boundary with from_corners()/left()/top().
struct BoundingBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 1.0;
  double h = 1.0;

  static BoundingBox from_corners(double left, double top, double width, double height) {
    return {left + width / 2.0, top + height / 2.0, width, height};
  }
  static BoundingBox from_ltrb(double x1, double y1, double x2, double y2) {
    return from_corners(x1, y1, x2 - x1, y2 - y1);
  }

  double left() const { return cx - w / 2.0; }
  double top() const { return cy - h / 2.0; }
  double right() const { return cx + w / 2.0; }
  double bottom() const { return cy + h / 2.0; }
  double area() const { return w * h; }

  bool valid() const;

  BoundingBox translated(double dx, double dy) const { return {cx + dx, cy + dy, w, h}; }
  /// Scales width and height by `ratio` about the center.
  BoundingBox scaled(double ratio) const { return {cx, cy, w * ratio, h * ratio}; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Detection {
  FrameIndex frame = 1;
  BoundingBox box;
  double score = 1.0;
  int class_id = 0;
  DetectionId det_id = -1;
  // Set on boxes synthesized by interpolation; never on ingested detections.
  bool interpolated = false;

  friend bool operator==(const Detection&, const Detection&) = default;
};

/// Orders detections by (frame, det_id); the canonical ordering everywhere.
bool detection_less(const Detection& a, const Detection& b);

/// Assigns det_id 0..n-1 in input order (ingestion order).
void assign_detection_ids(std::span<Detection> detections);

/// Throws if ids are not unique or any detection is malformed.
void validate_detections(std::span<const Detection> detections);

/// Frame-sorted run of one target's detections.
///
/// Construction sorts the entries, rejects duplicate frames and mixed classes.
/// Instances are immutable after construction.
class Tracklet {
 public:
  Tracklet() = default;
  Tracklet(TrackletId id, std::vector<Detection> entries);

  TrackletId id() const { return id_; }
  const std::vector<Detection>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  FrameIndex t_min() const { return entries_.front().frame; }
  FrameIndex t_max() const { return entries_.back().frame; }
  const Detection& front() const { return entries_.front(); }
  const Detection& back() const { return entries_.back(); }
  int class_id() const { return entries_.front().class_id; }

  /// Entry at `frame`, or nullptr.
  const Detection* at_frame(FrameIndex frame) const;

 private:
  TrackletId id_ = -1;
  std::vector<Detection> entries_;
};

/// Deterministic ordering key used for tie-breaking: (t_min, first det_id).
bool tracklet_less(const Tracklet& a, const Tracklet& b);

}  // namespace hit
