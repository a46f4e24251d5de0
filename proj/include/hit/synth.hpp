#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hit/core.hpp"
#include "hit/refine.hpp"

namespace hit {

enum class MotionModel { Linear, Sinusoidal, Crossing };

/// Frames [first, last] of one target (0-based target index) without detections.
struct MissInterval {
  int target = 0;
  FrameIndex first = 1;
  FrameIndex last = 1;
};

/// Frames [first, last] of one target detected with `score` instead of the base score.
struct ScoreDip {
  int target = 0;
  FrameIndex first = 1;
  FrameIndex last = 1;
  double score = 0.3;
};

struct ScenarioSpec {
  int n_targets = 10;
  int n_frames = 100;
  MotionModel motion = MotionModel::Linear;

  std::vector<MissInterval> misses;
  double miss_probability = 0.0;

  double noise_sigma = 0.0;       // center noise, pixels
  double size_noise_sigma = 0.0;  // log-normal factor on w and h

  double base_score = 0.9;
  std::vector<ScoreDip> score_dips;

  // Image-space drift per frame caused by the camera.
  double pan_x = 0.0;
  double pan_y = 0.0;

  double min_width = 30.0;
  double max_width = 60.0;
  double aspect = 2.0;     // h / w
  double max_speed = 2.0;  // per axis, pixels per frame (Linear, Sinusoidal)
  double sine_amplitude = 20.0;
  double sine_period = 40.0;
  // Crossing: per-target speed and center gap at the crossing frame, in widths.
  double crossing_speed = 0.4;
  double crossing_gap = 0.2;

  double image_width = 1920.0;
  double image_height = 1080.0;
  // Minimum axis gap in pixels between any two GT boxes in every frame; negative disables.
  double separation_margin = -1.0;
  // Reject placements whose box leaves the image in any frame.
  bool require_inside = false;

  std::uint64_t seed = 1;
};

struct Scenario {
  // track_id = target index + 1; one entry per frame 1..n_frames.
  std::vector<Trajectory> ground_truth;
  // Shuffled within each frame; det_id is the position in this vector.
  std::vector<Detection> detections;
  // GT target index per detection.
  std::vector<int> detection_target;
};

/// Throws Error for an invalid spec, if a target is never inside the image,
/// or if no placement satisfies the separation/containment constraints.
///
/// Crossing scenes pair targets (n_targets must be even): the two targets of a
/// pair share size and row and move toward each other at crossing_speed * w
/// per frame; their centers are crossing_gap * w apart at frame n_frames / 2.
/// With the defaults their GT IoU exceeds 0.5 in exactly that frame.
Scenario generate(const ScenarioSpec& spec);

/// Ground truth restricted to frames where the box intersects the image.
std::vector<Trajectory> visible_ground_truth(const Scenario& scenario, const ScenarioSpec& spec);

/// Ground truth restricted to frames where the target has a detection.
std::vector<Trajectory> observed_ground_truth(const Scenario& scenario);

/// Relabels every run that follows a gap: either a fresh id (a split) or the
/// id of another track with no entry in or next to the run's frames (an
/// identity switch). Runs never become frame-adjacent to a run of a different
/// target, so every corruption sits at a discontinuity. Deterministic in `seed`.
std::vector<Trajectory> corrupt_at_gaps(std::span<const Trajectory> tracks, std::uint64_t seed);

}  // namespace hit
