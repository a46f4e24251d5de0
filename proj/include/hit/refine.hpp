#pragma once

#include <span>
#include <vector>

#include "hit/core.hpp"

namespace hit {

enum class Provenance { Native, Recombined };

/// A final per-identity track. Entries are frame-sorted without duplicates.
struct Trajectory {
  int track_id = 0;
  std::vector<Detection> entries;
  Provenance provenance = Provenance::Native;

  FrameIndex t_min() const { return entries.front().frame; }
  FrameIndex t_max() const { return entries.back().frame; }
};

/// Throws unless entries are non-empty with strictly increasing frames.
void validate_trajectory(const Trajectory& trajectory);

/// Splits every trajectory into maximal runs of consecutive frames. Output is
/// ordered by (t_min, first det_id); each tracklet's id is its first det_id.
std::vector<Tracklet> split_at_discontinuities(std::span<const Trajectory> trajectories);

/// Union of two tracklets sharing at most `max_overlap` frames. On a shared
/// frame the higher score wins, then the tracklet with the smaller t_min, then
/// the smaller det_id. The result carries the id of the tracklet that starts first.
Tracklet resolve_overlap(const Tracklet& a, const Tracklet& b, int max_overlap);

/// Linearly fills every internal gap of at most `max_gap` missing frames.
/// Inserted entries are flagged `interpolated`, carry det_id -1 and the mean
/// of the bracketing scores.
Trajectory interpolate(const Trajectory& trajectory, int max_gap);

/// Gaussian kernel smoothing of cx, cy, w, h over each run of consecutive
/// frames. Radius is ceil(2 sigma); the kernel is truncated and renormalized at
/// run ends. Frames and scores are untouched; w and h clamp to >= 1.
Trajectory gaussian_smooth(const Trajectory& trajectory, double sigma);

/// Ids 1..n in (t_min, first det_id) order.
void relabel_trajectories(std::vector<Trajectory>& trajectories);

}  // namespace hit
