#include "hit/refine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hit/motion.hpp"

namespace hit {

void validate_trajectory(const Trajectory& trajectory) {
  if (trajectory.entries.empty())
    throw Error("trajectory " + std::to_string(trajectory.track_id) + " is empty");
  for (std::size_t i = 1; i < trajectory.entries.size(); ++i) {
    if (trajectory.entries[i].frame <= trajectory.entries[i - 1].frame)
      throw Error("trajectory " + std::to_string(trajectory.track_id) +
                  " frames are not strictly increasing");
  }
}

std::vector<Tracklet> split_at_discontinuities(std::span<const Trajectory> trajectories) {
  std::vector<Tracklet> out;
  for (const auto& traj : trajectories) {
    validate_trajectory(traj);
    std::vector<Detection> run;
    auto flush = [&] {
      if (run.empty()) return;
      const TrackletId id = run.front().det_id;
      out.emplace_back(id, std::move(run));
      run.clear();
    };
    for (const auto& d : traj.entries) {
      if (!run.empty() && d.frame != run.back().frame + 1) flush();
      run.push_back(d);
    }
    flush();
  }
  std::sort(out.begin(), out.end(), tracklet_less);
  return out;
}

Tracklet resolve_overlap(const Tracklet& a, const Tracklet& b, int max_overlap) {
  const int overlap = range_overlap(a, b);
  if (overlap > max_overlap)
    throw Error("tracklets " + std::to_string(a.id()) + " and " + std::to_string(b.id()) +
                " overlap by " + std::to_string(overlap) + " frames, allowance is " +
                std::to_string(max_overlap));
  const bool a_first = tracklet_less(a, b);
  const Tracklet& first = a_first ? a : b;
  const Tracklet& second = a_first ? b : a;

  std::vector<Detection> merged;
  merged.reserve(first.size() + second.size());
  const auto& ea = first.entries();
  const auto& eb = second.entries();
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].frame < eb[j].frame)) {
      merged.push_back(ea[i++]);
    } else if (i == ea.size() || eb[j].frame < ea[i].frame) {
      merged.push_back(eb[j++]);
    } else {
      const Detection& x = ea[i++];
      const Detection& y = eb[j++];
      // Higher score, then the earlier-starting tracklet, then smaller det_id.
      bool take_x;
      if (x.score != y.score) {
        take_x = x.score > y.score;
      } else if (first.t_min() != second.t_min()) {
        take_x = true;
      } else {
        take_x = x.det_id <= y.det_id;
      }
      merged.push_back(take_x ? x : y);
    }
  }
  return Tracklet(first.id(), std::move(merged));
}

Trajectory interpolate(const Trajectory& trajectory, int max_gap) {
  validate_trajectory(trajectory);
  Trajectory out = trajectory;
  out.entries.clear();
  const auto& e = trajectory.entries;
  for (std::size_t i = 0; i < e.size(); ++i) {
    out.entries.push_back(e[i]);
    if (i + 1 == e.size()) break;
    const Detection& a = e[i];
    const Detection& b = e[i + 1];
    const int missing = b.frame - a.frame - 1;
    if (missing < 1 || missing > max_gap) continue;
    const double span = static_cast<double>(b.frame - a.frame);
    for (FrameIndex f = a.frame + 1; f < b.frame; ++f) {
      const double t = static_cast<double>(f - a.frame) / span;
      Detection d;
      d.frame = f;
      d.box = {a.box.cx + t * (b.box.cx - a.box.cx), a.box.cy + t * (b.box.cy - a.box.cy),
               a.box.w + t * (b.box.w - a.box.w), a.box.h + t * (b.box.h - a.box.h)};
      d.score = 0.5 * (a.score + b.score);
      d.class_id = a.class_id;
      d.det_id = -1;
      d.interpolated = true;
      out.entries.push_back(d);
    }
  }
  return out;
}

namespace {

void smooth_run(std::vector<Detection>& entries, std::size_t begin, std::size_t end,
                const std::vector<double>& kernel, int radius) {
  const auto n = static_cast<long>(end - begin);
  std::vector<std::array<double, 4>> src(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const auto& b = entries[begin + static_cast<std::size_t>(i)].box;
    src[static_cast<std::size_t>(i)] = {b.cx, b.cy, b.w, b.h};
  }
  for (long i = 0; i < n; ++i) {
    std::array<double, 4> acc{0.0, 0.0, 0.0, 0.0};
    double norm = 0.0;
    for (long k = -radius; k <= radius; ++k) {
      const long j = i + k;
      if (j < 0 || j >= n) continue;
      const double wgt = kernel[static_cast<std::size_t>(k + radius)];
      for (int c = 0; c < 4; ++c) acc[c] += wgt * src[static_cast<std::size_t>(j)][c];
      norm += wgt;
    }
    auto& b = entries[begin + static_cast<std::size_t>(i)].box;
    b.cx = acc[0] / norm;
    b.cy = acc[1] / norm;
    b.w = std::max(acc[2] / norm, 1.0);
    b.h = std::max(acc[3] / norm, 1.0);
  }
}

}  // namespace

Trajectory gaussian_smooth(const Trajectory& trajectory, double sigma) {
  validate_trajectory(trajectory);
  Trajectory out = trajectory;
  if (!(sigma > 0.0)) return out;
  const int radius = static_cast<int>(std::ceil(2.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  for (int k = -radius; k <= radius; ++k)
    kernel[static_cast<std::size_t>(k + radius)] = std::exp(-0.5 * k * k / (sigma * sigma));
  if (kernel[static_cast<std::size_t>(radius)] <= 0.0) return out;

  auto& e = out.entries;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= e.size(); ++i) {
    if (i == e.size() || e[i].frame != e[i - 1].frame + 1) {
      smooth_run(e, begin, i, kernel, radius);
      begin = i;
    }
  }
  return out;
}

void relabel_trajectories(std::vector<Trajectory>& trajectories) {
  std::sort(trajectories.begin(), trajectories.end(), [](const Trajectory& a, const Trajectory& b) {
    if (a.t_min() != b.t_min()) return a.t_min() < b.t_min();
    return a.entries.front().det_id < b.entries.front().det_id;
  });
  int next = 1;
  for (auto& t : trajectories) t.track_id = next++;
}

}  // namespace hit
