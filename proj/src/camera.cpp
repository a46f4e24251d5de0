#include "hit/camera.hpp"

#include <algorithm>
#include <iostream>
#include <string>

#include "hit/geometry.hpp"

namespace hit {

CameraProfile CameraProfile::stationary(FrameIndex frame_count) {
  CameraProfile p;
  p.frame_count = std::max(frame_count, 0);
  p.per_frame.assign(static_cast<std::size_t>(std::max(p.frame_count - 1, 0)), Offset{});
  p.cumulative.assign(static_cast<std::size_t>(p.frame_count), Offset{});
  return p;
}

Offset CameraProfile::offset_at(FrameIndex frame) const {
  if (frame < 1 || frame >= frame_count)
    throw Error("camera profile has no per-frame offset for frame " + std::to_string(frame));
  return per_frame[static_cast<std::size_t>(frame - 1)];
}

Offset CameraProfile::cumulative_at(FrameIndex frame) const {
  if (!covers(frame))
    throw Error("frame " + std::to_string(frame) + " outside camera profile [1, " +
                std::to_string(frame_count) + "]");
  return cumulative[static_cast<std::size_t>(frame - 1)];
}

CameraProfile estimate_camera(std::span<const AdjacentMatch> matches, double moving_threshold,
                              FrameIndex frame_count) {
  CameraProfile p = CameraProfile::stationary(frame_count);
  p.match_count = matches.size();
  if (matches.empty()) {
    std::clog << "camera: no adjacent matches, assuming a static camera\n";
    return p;
  }

  double iou_sum = 0.0;
  for (const auto& m : matches) iou_sum += iou(m.earlier.box, m.later.box);
  p.mean_match_iou = iou_sum / static_cast<double>(matches.size());
  p.moving = p.mean_match_iou < moving_threshold;
  if (!p.moving) return p;

  std::vector<int> counts(p.per_frame.size(), 0);
  for (const auto& m : matches) {
    const FrameIndex t = m.earlier.frame;
    if (m.later.frame != t + 1) throw Error("camera: match does not link adjacent frames");
    if (t < 1 || t >= frame_count) throw Error("camera: match outside the sequence range");
    auto& off = p.per_frame[static_cast<std::size_t>(t - 1)];
    off.x += m.later.box.cx - m.earlier.box.cx;
    off.y += m.later.box.cy - m.earlier.box.cy;
    ++counts[static_cast<std::size_t>(t - 1)];
  }
  for (std::size_t i = 0; i < p.per_frame.size(); ++i) {
    if (counts[i] > 0) {
      p.per_frame[i].x /= counts[i];
      p.per_frame[i].y /= counts[i];
    }
  }
  for (std::size_t i = 1; i < p.cumulative.size(); ++i) {
    p.cumulative[i].x = p.cumulative[i - 1].x + p.per_frame[i - 1].x;
    p.cumulative[i].y = p.cumulative[i - 1].y + p.per_frame[i - 1].y;
  }
  return p;
}

namespace {

std::vector<Detection> shift(std::span<const Detection> detections, const CameraProfile& profile,
                             double sign) {
  std::vector<Detection> out(detections.begin(), detections.end());
  for (auto& d : out) {
    const Offset c = profile.cumulative_at(d.frame);
    d.box.cx += sign * c.x;
    d.box.cy += sign * c.y;
  }
  return out;
}

}  // namespace

std::vector<Detection> stabilize(std::span<const Detection> detections,
                                 const CameraProfile& profile) {
  return shift(detections, profile, -1.0);
}

std::vector<Detection> destabilize(std::span<const Detection> detections,
                                   const CameraProfile& profile) {
  return shift(detections, profile, 1.0);
}

}  // namespace hit
