#pragma once

#include <span>
#include <vector>

#include "hit/core.hpp"

namespace hit {

struct Offset {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Two detections of one target in consecutive frames.
struct AdjacentMatch {
  Detection earlier;
  Detection later;
};

/// Detection-only estimate of the camera pan for one sequence.
struct CameraProfile {
  double mean_match_iou = 1.0;  // O_k; 1 when no matches were available
  bool moving = false;
  std::size_t match_count = 0;
  FrameIndex frame_count = 0;
  // per_frame[t - 1]: displacement from frame t to t + 1, t in [1, frame_count - 1].
  std::vector<Offset> per_frame;
  // cumulative[t - 1]: total displacement from frame 1 to t, t in [1, frame_count].
  std::vector<Offset> cumulative;

  /// Zero-offset profile covering frames 1..frame_count.
  static CameraProfile stationary(FrameIndex frame_count);

  bool covers(FrameIndex frame) const { return frame >= 1 && frame <= frame_count; }
  Offset offset_at(FrameIndex frame) const;
  Offset cumulative_at(FrameIndex frame) const;
};

/// Mean raw IoU of the matches decides whether the camera moves; if it does,
/// per-frame offsets are mean center displacements of the pairs linking t and
/// t + 1 (zero when a frame has no pair) and cumulative offsets their prefix
/// sums. An empty match set yields a stationary profile.
CameraProfile estimate_camera(std::span<const AdjacentMatch> matches, double moving_threshold,
                              FrameIndex frame_count);

/// Shifts each center by -cumulative_at(frame). Throws for frames outside the profile.
std::vector<Detection> stabilize(std::span<const Detection> detections,
                                 const CameraProfile& profile);
/// Inverse of stabilize().
std::vector<Detection> destabilize(std::span<const Detection> detections,
                                   const CameraProfile& profile);

}  // namespace hit
