#pragma once

#include <span>
#include <vector>

#include "hit/camera.hpp"
#include "hit/config.hpp"
#include "hit/core.hpp"
#include "hit/geometry.hpp"
#include "hit/refine.hpp"

namespace hit {

/// Similarity and gating used by every association step.
struct AssociationParams {
  OverlapKernel kernel;
  MotionNoise noise;
  double gate = 0.2;

  static AssociationParams from_config(const TrackerConfig& cfg);
};

/// Tracklets after some number of hierarchy levels.
struct HierarchyState {
  int level = 0;                     // levels completed so far
  std::vector<Tracklet> tracklets;   // sorted by tracklet_less
  std::vector<std::size_t> counts;   // N_1 .. N_{level+1}
};

struct LevelSnapshot {
  int level = 0;
  HierarchyStage stage;
  std::vector<Tracklet> tracklets;
};

/// Result of the static adjacent-frame pass.
struct AdjacentPassResult {
  std::vector<Tracklet> chains;
  std::vector<AdjacentMatch> matches;
};

/// Links detections in consecutive frames by per-frame-pair Hungarian matching
/// on the static kernel (no motion). Every detection ends up in exactly one chain.
AdjacentPassResult adjacent_pass(std::span<const Detection> detections,
                                 const AssociationParams& params);

/// Second adjacent-frame pass seeded with motion from `preliminary_chains`.
/// The similarity of a detection to a next-frame candidate is the larger of
/// the kernel between the candidate and the forward Kalman prediction from the
/// detection's preceding chain history, and between the detection and the
/// backward prediction from the candidate's succeeding history. Where the
/// preliminary pass linked two targets, one of the two histories of each
/// affected pair is polluted; taking the larger value lets the clean side
/// decide. Length-1 histories predict their own box, i.e. fall back to static
/// overlap. Only the new links are kept.
std::vector<Tracklet> consistent_motion_pass(std::span<const Tracklet> preliminary_chains,
                                             const AssociationParams& params);

/// Extends tracklet endpoints with frame-adjacent low-score detections, one
/// frame per round until no gated match remains. Unmatched low-score
/// detections are dropped.
HierarchyState byte_recovery(HierarchyState state, std::span<const Detection> low_score,
                             const AssociationParams& params);

/// One interval-scheduled level: pairs with interval in [1, stage.interval_bound],
/// or sharing at most stage.overlap_allowance frames, are matched and merged,
/// repeatedly, until no match survives the gate.
HierarchyState hierarchy_pass(HierarchyState state, const HierarchyStage& stage,
                              const AssociationParams& params);

/// Temporal-window baseline: the timeline is cut into non-overlapping windows
/// of `stage.interval_bound` frames and only tracklets lying inside the same
/// window are associated, regardless of their interval.
HierarchyState window_strategy_pass(HierarchyState state, const HierarchyStage& stage,
                                    const AssociationParams& params);

struct RunOptions {
  bool keep_snapshots = false;
};

struct RunReport {
  int class_id = 0;
  CameraProfile camera;
  std::vector<std::size_t> counts;       // N_1 .. N_{L+1}
  std::vector<LevelSnapshot> snapshots;  // original coordinates
};

struct RunResult {
  std::vector<Trajectory> trajectories;
  RunReport report;
};

/// Full pipeline on one class of one sequence.
RunResult run(std::span<const Detection> detections, const TrackerConfig& cfg,
              const RunOptions& options = {});

/// Recombination: tracklets (e.g. an external tracker's output split at
/// discontinuities) go through every level of the schedule.
RunResult run_tracklets(std::vector<Tracklet> tracklets, const TrackerConfig& cfg,
                        const RunOptions& options = {});

struct SequenceResult {
  std::vector<Trajectory> trajectories;  // ids 1..n
  std::vector<RunReport> reports;        // one per class, ascending class_id
};

/// Partitions detections by class and runs each class independently.
SequenceResult track_sequence(std::span<const Detection> detections, const TrackerConfig& cfg,
                              const RunOptions& options = {});

/// Splits trajectories at discontinuities and recombines them, per class.
SequenceResult recombine_sequence(std::span<const Trajectory> trajectories,
                                  const TrackerConfig& cfg, const RunOptions& options = {});

}  // namespace hit
