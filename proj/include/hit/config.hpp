#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hit/core.hpp"

namespace hit {

enum class ScheduleStrategy { Interval, Window };

struct HierarchyStage {
  // Interval strategy: maximum tracklet interval admitted at this level.
  // Window strategy: window length in frames.
  int interval_bound = 1;
  // Maximum number of co-occurring frames two tracklets may share.
  int overlap_allowance = 0;

  friend bool operator==(const HierarchyStage&, const HierarchyStage&) = default;
};

struct HierarchySchedule {
  std::vector<HierarchyStage> stages;
  ScheduleStrategy strategy = ScheduleStrategy::Interval;

  /// [1, 5, 10, 15, 20, 30, +-5]; the last level keeps the 30-frame bound and
  /// admits up to 5 overlapping frames.
  static HierarchySchedule standard();

  friend bool operator==(const HierarchySchedule&, const HierarchySchedule&) = default;
};

/// Kalman noise scales, as fractions of the box height.
struct MotionNoise {
  double position = 1.0 / 20.0;
  double velocity = 1.0 / 160.0;

  friend bool operator==(const MotionNoise&, const MotionNoise&) = default;
};

struct TrackerConfig {
  double match_threshold = 0.2;      // unified gate on every hierarchy
  double ci_width_threshold = 64.0;  // boxes narrower than this get expanded
  double ci_scaling_factor = 0.2;
  double cc_threshold = 0.65;        // mean matched IoU below this => moving camera
  double score_high = 0.6;
  double score_low = 0.1;
  bool use_hm_iou = false;
  bool enable_ci = true;
  bool enable_cc = true;
  bool enable_cm = true;
  HierarchySchedule schedule = HierarchySchedule::standard();
  int interpolation_max_gap = 20;
  double smoothing_sigma = 5.0;
  MotionNoise motion_noise;
  std::uint64_t rng_seed = 0;

  friend bool operator==(const TrackerConfig&, const TrackerConfig&) = default;
};

struct ConfigIssue {
  std::string field;
  std::string message;
};

/// Every violated invariant, in field order. Empty means valid.
std::vector<ConfigIssue> check_config(const TrackerConfig& cfg);

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Returns `cfg` unchanged when valid; throws InvalidConfig with the full report otherwise.
TrackerConfig validate_config(const TrackerConfig& cfg);

}  // namespace hit
