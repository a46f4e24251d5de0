#include "hit/config.hpp"

#include <cmath>
#include <sstream>

namespace hit {

HierarchySchedule HierarchySchedule::standard() {
  return {{{1, 0}, {5, 0}, {10, 0}, {15, 0}, {20, 0}, {30, 0}, {30, 5}},
          ScheduleStrategy::Interval};
}

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::ostringstream os;
  os << "invalid tracker config:";
  for (const auto& issue : issues) os << "\n  " << issue.field << ": " << issue.message;
  return os.str();
}

}  // namespace

InvalidConfig::InvalidConfig(std::vector<ConfigIssue> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

std::vector<ConfigIssue> check_config(const TrackerConfig& cfg) {
  std::vector<ConfigIssue> issues;
  auto fail = [&](std::string field, std::string msg) {
    issues.push_back({std::move(field), std::move(msg)});
  };

  if (!(cfg.match_threshold > 0.0 && cfg.match_threshold < 1.0))
    fail("match_threshold", "must lie in (0, 1)");
  if (!(cfg.ci_width_threshold > 0.0)) fail("ci_width_threshold", "must be > 0");
  if (!(cfg.ci_scaling_factor > 0.0)) fail("ci_scaling_factor", "must be > 0");
  if (!(cfg.cc_threshold >= 0.0 && cfg.cc_threshold <= 1.0))
    fail("cc_threshold", "must lie in [0, 1]");
  if (!(cfg.score_low >= 0.0 && cfg.score_low <= 1.0)) fail("score_low", "must lie in [0, 1]");
  if (!(cfg.score_high >= 0.0 && cfg.score_high <= 1.0)) fail("score_high", "must lie in [0, 1]");
  if (cfg.score_low > cfg.score_high) fail("score_low", "must not exceed score_high");
  if (cfg.interpolation_max_gap < 0) fail("interpolation_max_gap", "must be >= 0");
  if (!(cfg.smoothing_sigma >= 0.0)) fail("smoothing_sigma", "must be >= 0");
  if (!(cfg.motion_noise.position > 0.0)) fail("motion_noise.position", "must be > 0");
  if (!(cfg.motion_noise.velocity > 0.0)) fail("motion_noise.velocity", "must be > 0");

  const auto& stages = cfg.schedule.stages;
  if (stages.empty()) {
    fail("schedule", "needs at least one stage");
  } else {
    if (stages.front().interval_bound != 1)
      fail("schedule", "the first stage is the adjacent-frame pass and must have bound 1");
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const auto& s = stages[i];
      const std::string where = "schedule.stages[" + std::to_string(i) + "]";
      if (s.interval_bound < 1) fail(where, "interval bound must be >= 1");
      if (s.overlap_allowance < 0) fail(where, "overlap allowance must be >= 0");
      if (s.overlap_allowance > 0 && i + 1 != stages.size())
        fail(where, "overlap allowance is only permitted in the final stage");
      if (i > 0 && s.interval_bound < stages[i - 1].interval_bound)
        fail(where, "interval bounds must be non-decreasing");
    }
  }
  return issues;
}

TrackerConfig validate_config(const TrackerConfig& cfg) {
  auto issues = check_config(cfg);
  if (!issues.empty()) throw InvalidConfig(std::move(issues));
  return cfg;
}

}  // namespace hit
