#include "hit/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hit {

bool BoundingBox::valid() const {
  return std::isfinite(cx) && std::isfinite(cy) && std::isfinite(w) && std::isfinite(h) &&
         w > 0.0 && h > 0.0;
}

bool detection_less(const Detection& a, const Detection& b) {
  if (a.frame != b.frame) return a.frame < b.frame;
  return a.det_id < b.det_id;
}

void assign_detection_ids(std::span<Detection> detections) {
  DetectionId next = 0;
  for (auto& d : detections) d.det_id = next++;
}

void validate_detections(std::span<const Detection> detections) {
  std::set<DetectionId> seen;
  for (const auto& d : detections) {
    if (d.frame < 1) throw Error("detection " + std::to_string(d.det_id) + ": frame must be >= 1");
    if (!d.box.valid()) throw Error("detection " + std::to_string(d.det_id) + ": invalid box");
    if (!(d.score >= 0.0 && d.score <= 1.0))
      throw Error("detection " + std::to_string(d.det_id) + ": score outside [0,1]");
    if (!d.interpolated && !seen.insert(d.det_id).second)
      throw Error("duplicate det_id " + std::to_string(d.det_id));
  }
}

Tracklet::Tracklet(TrackletId id, std::vector<Detection> entries)
    : id_(id), entries_(std::move(entries)) {
  if (entries_.empty()) throw Error("tracklet " + std::to_string(id) + " has no entries");
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].frame == entries_[i - 1].frame)
      throw Error("tracklet " + std::to_string(id) + " has two entries at frame " +
                  std::to_string(entries_[i].frame));
    if (entries_[i].class_id != entries_[0].class_id)
      throw Error("tracklet " + std::to_string(id) + " mixes classes");
  }
}

const Detection* Tracklet::at_frame(FrameIndex frame) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), frame,
                             [](const Detection& d, FrameIndex f) { return d.frame < f; });
  if (it == entries_.end() || it->frame != frame) return nullptr;
  return &*it;
}

bool tracklet_less(const Tracklet& a, const Tracklet& b) {
  if (a.t_min() != b.t_min()) return a.t_min() < b.t_min();
  return a.front().det_id < b.front().det_id;
}

}  // namespace hit
