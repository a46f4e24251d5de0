#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "hit/config.hpp"
#include "hit/core.hpp"
#include "hit/geometry.hpp"

namespace hit {

enum class Direction { Forward, Backward };

using StateVector = Eigen::Matrix<double, 8, 1>;
using StateCovariance = Eigen::Matrix<double, 8, 8>;

/// Constant-velocity state (cx, cy, w, h, vcx, vcy, vw, vh). Velocities are per
/// frame in the filter's own time direction, so a Backward state moving right
/// in forward time carries a negative vcx.
struct MotionState {
  StateVector mean = StateVector::Zero();
  StateCovariance covariance = StateCovariance::Identity();
  FrameIndex anchor_frame = 1;
  Direction direction = Direction::Forward;

  BoundingBox box() const;
};

/// Linear Kalman filter on MotionState. Noise scales with the state's height.
class KalmanBoxFilter {
 public:
  explicit KalmanBoxFilter(MotionNoise noise = {}) : noise_(noise) {}

  MotionState initiate(const BoundingBox& box, FrameIndex frame, Direction direction) const;
  /// One constant-velocity step; anchor_frame moves one frame in the state's direction.
  void predict(MotionState& state) const;
  void update(MotionState& state, const BoundingBox& measurement) const;

 private:
  MotionNoise noise_;
};

/// Filters `entries` (frame-sorted) in the requested time direction, inserting
/// one predict step per missing frame, and returns the final filtered state.
MotionState fit(std::span<const Detection> entries, Direction direction,
                const MotionNoise& noise = {});
MotionState fit(const Tracklet& tracklet, Direction direction, const MotionNoise& noise = {});

/// Filtered state after each entry, indexed like `entries` (frame order)
/// regardless of direction: result[i] has seen entries[0..i] (Forward) or
/// entries[i..] (Backward).
std::vector<MotionState> filter_history(std::span<const Detection> entries, Direction direction,
                                        const MotionNoise& noise = {});

/// Propagates the mean |target - anchor| steps; width and height clamp to >= 1.
/// Throws if the target lies on the wrong side of the anchor for the direction.
BoundingBox predict(const MotionState& state, FrameIndex target_frame);

/// Bidirectional prediction similarity of two tracklets.
///
/// Disjoint pairs (earlier.t_max < later.t_min): mean of kernel(forward
/// prediction of `earlier` at later.t_min, later's first box) and
/// kernel(backward prediction of `later` at earlier.t_max, earlier's last box).
/// Overlapping pairs (at most `max_overlap` shared frames in range): mean kernel
/// over co-occurring frames using actual boxes.
double pair_similarity(const Tracklet& earlier, const Tracklet& later, const OverlapKernel& kernel,
                       const MotionNoise& noise = {}, int max_overlap = 0);

/// Same as above with the directional fits supplied by the caller.
double pair_similarity(const Tracklet& earlier, const Tracklet& later,
                       const MotionState& earlier_forward, const MotionState& later_backward,
                       const OverlapKernel& kernel, int max_overlap = 0);

/// Number of frames in the intersection of the two tracklets' frame ranges.
int range_overlap(const Tracklet& a, const Tracklet& b);

}  // namespace hit
