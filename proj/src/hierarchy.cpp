#include "hit/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include "hit/assignment.hpp"
#include "hit/motion.hpp"

namespace hit {

AssociationParams AssociationParams::from_config(const TrackerConfig& cfg) {
  return {OverlapKernel::from_config(cfg), cfg.motion_noise, cfg.match_threshold};
}

namespace {

std::vector<Detection> sorted_detections(std::span<const Detection> detections) {
  std::vector<Detection> out(detections.begin(), detections.end());
  std::sort(out.begin(), out.end(), detection_less);
  return out;
}

struct FrameBucket {
  FrameIndex frame;
  std::size_t begin;
  std::size_t end;
};

std::vector<FrameBucket> bucket_by_frame(const std::vector<Detection>& sorted) {
  std::vector<FrameBucket> buckets;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (buckets.empty() || buckets.back().frame != sorted[i].frame)
      buckets.push_back({sorted[i].frame, i, i});
    buckets.back().end = i + 1;
  }
  return buckets;
}

// Per-frame-pair Hungarian linking. `similarity(a, b)` scores detection a at
// frame t against detection b at frame t + 1 (indices into `sorted`).
template <typename Similarity>
std::vector<int> link_adjacent_frames(const std::vector<Detection>& sorted, double gate,
                                      Similarity&& similarity) {
  std::vector<int> next(sorted.size(), -1);
  const auto buckets = bucket_by_frame(sorted);
  for (std::size_t k = 0; k + 1 < buckets.size(); ++k) {
    const auto& a = buckets[k];
    const auto& b = buckets[k + 1];
    if (b.frame != a.frame + 1) continue;
    SimilarityMatrix m(a.end - a.begin, b.end - b.begin);
    for (std::size_t r = a.begin; r < a.end; ++r)
      for (std::size_t c = b.begin; c < b.end; ++c)
        m.set(r - a.begin, c - b.begin, similarity(r, c));
    for (const auto& match : solve(m, gate))
      next[a.begin + match.row] = static_cast<int>(b.begin + match.col);
  }
  return next;
}

std::vector<Tracklet> chains_from_links(const std::vector<Detection>& sorted,
                                        const std::vector<int>& next) {
  std::vector<char> has_prev(sorted.size(), 0);
  for (int n : next)
    if (n >= 0) has_prev[static_cast<std::size_t>(n)] = 1;
  std::vector<Tracklet> chains;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (has_prev[i]) continue;
    std::vector<Detection> entries;
    for (int k = static_cast<int>(i); k >= 0; k = next[static_cast<std::size_t>(k)])
      entries.push_back(sorted[static_cast<std::size_t>(k)]);
    const TrackletId id = entries.front().det_id;
    chains.emplace_back(id, std::move(entries));
  }
  std::sort(chains.begin(), chains.end(), tracklet_less);
  return chains;
}

// Union-find over the bipartite candidate graph; rows are nodes [0, n), cols [n, 2n).
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Edge {
  std::size_t row;
  std::size_t col;
  double similarity;
};

// Solves the sparse bipartite problem component by component; exact because
// components share no rows or columns. Returns (row, col) links.
std::vector<std::pair<std::size_t, std::size_t>> solve_sparse(std::size_t n,
                                                              const std::vector<Edge>& edges,
                                                              double gate) {
  DisjointSets sets(2 * n);
  for (const auto& e : edges) sets.unite(e.row, n + e.col);

  std::map<std::size_t, std::vector<const Edge*>> components;
  for (const auto& e : edges) components[sets.find(e.row)].push_back(&e);

  std::vector<std::pair<std::size_t, std::size_t>> links;
  for (const auto& [root, comp] : components) {
    std::vector<std::size_t> rows, cols;
    for (const Edge* e : comp) {
      rows.push_back(e->row);
      cols.push_back(e->col);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    auto index_of = [](const std::vector<std::size_t>& v, std::size_t x) {
      return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
    };
    SimilarityMatrix m(rows.size(), cols.size());
    for (const Edge* e : comp) m.set(index_of(rows, e->row), index_of(cols, e->col), e->similarity);
    for (const auto& match : solve(m, gate)) links.emplace_back(rows[match.row], cols[match.col]);
  }
  std::sort(links.begin(), links.end());
  return links;
}

std::vector<Tracklet> merge_links(const std::vector<Tracklet>& tracklets,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& links,
                                  int max_overlap) {
  const std::size_t n = tracklets.size();
  std::vector<int> next(n, -1);
  std::vector<char> has_prev(n, 0);
  for (const auto& [i, j] : links) {
    next[i] = static_cast<int>(j);
    has_prev[j] = 1;
  }
  std::vector<Tracklet> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (has_prev[i]) continue;
    Tracklet acc = tracklets[i];
    for (int k = next[i]; k >= 0; k = next[static_cast<std::size_t>(k)])
      acc = resolve_overlap(acc, tracklets[static_cast<std::size_t>(k)], max_overlap);
    out.push_back(std::move(acc));
  }
  std::sort(out.begin(), out.end(), tracklet_less);
  return out;
}

enum class Scheduling { Interval, Window };

HierarchyState associate_level(HierarchyState state, const HierarchyStage& stage,
                               const AssociationParams& params, Scheduling scheduling) {
  const int bound = stage.interval_bound;
  const int allowance = stage.overlap_allowance;
  auto& tracklets = state.tracklets;
  std::sort(tracklets.begin(), tracklets.end(), tracklet_less);

  while (true) {
    const std::size_t n = tracklets.size();
    std::vector<FrameIndex> starts(n);
    for (std::size_t i = 0; i < n; ++i) starts[i] = tracklets[i].t_min();

    std::vector<std::optional<MotionState>> forward(n), backward(n);
    auto forward_of = [&](std::size_t i) -> const MotionState& {
      if (!forward[i]) forward[i] = fit(tracklets[i], Direction::Forward, params.noise);
      return *forward[i];
    };
    auto backward_of = [&](std::size_t j) -> const MotionState& {
      if (!backward[j]) backward[j] = fit(tracklets[j], Direction::Backward, params.noise);
      return *backward[j];
    };

    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      const Tracklet& earlier = tracklets[i];
      const FrameIndex lo = std::max(earlier.t_min() + 1, earlier.t_max() + 1 - allowance);
      FrameIndex hi = earlier.t_max() + bound;
      FrameIndex window_end = 0;
      if (scheduling == Scheduling::Window) {
        window_end = ((earlier.t_min() - 1) / bound + 1) * bound;
        if (earlier.t_max() > window_end) continue;
        hi = window_end;
      }
      auto it = std::lower_bound(starts.begin(), starts.end(), lo);
      for (auto j = static_cast<std::size_t>(it - starts.begin()); j < n && starts[j] <= hi; ++j) {
        const Tracklet& later = tracklets[j];
        if (scheduling == Scheduling::Window && later.t_max() > window_end) continue;
        double sim;
        if (later.t_min() <= earlier.t_max()) {
          if (later.t_max() <= earlier.t_max() || range_overlap(earlier, later) > allowance) continue;
          sim = pair_similarity(earlier, later, params.kernel, params.noise, allowance);
        } else {
          sim = pair_similarity(earlier, later, forward_of(i), backward_of(j), params.kernel,
                                allowance);
        }
        if (sim > 0.0) edges.push_back({i, j, sim});
      }
    }

    const auto links = solve_sparse(n, edges, params.gate);
    if (links.empty()) break;
    tracklets = merge_links(tracklets, links, allowance);
  }

  ++state.level;
  state.counts.push_back(tracklets.size());
  return state;
}

std::vector<Tracklet> map_entries(std::span<const Tracklet> tracklets,
                                  std::vector<Detection> (*transform)(std::span<const Detection>,
                                                                      const CameraProfile&),
                                  const CameraProfile& profile) {
  std::vector<Tracklet> out;
  out.reserve(tracklets.size());
  for (const auto& t : tracklets) out.emplace_back(t.id(), transform(t.entries(), profile));
  return out;
}

void check_single_class(std::span<const Detection> detections) {
  for (const auto& d : detections)
    if (d.class_id != detections.front().class_id)
      throw Error("run: detections span several classes; use track_sequence");
}

FrameIndex last_frame(std::span<const Detection> detections) {
  FrameIndex f = 0;
  for (const auto& d : detections) f = std::max(f, d.frame);
  return f;
}

std::vector<Trajectory> to_trajectories(std::span<const Tracklet> tracklets, Provenance provenance) {
  std::vector<Trajectory> out;
  out.reserve(tracklets.size());
  for (const auto& t : tracklets) out.push_back({0, t.entries(), provenance});
  relabel_trajectories(out);
  return out;
}

HierarchyState run_levels(HierarchyState state, const TrackerConfig& cfg, std::size_t first_stage,
                          const AssociationParams& params, const CameraProfile& profile,
                          const RunOptions& options, RunReport& report) {
  const auto& stages = cfg.schedule.stages;
  for (std::size_t s = first_stage; s < stages.size(); ++s) {
    if (cfg.schedule.strategy == ScheduleStrategy::Window && s > 0)
      state = window_strategy_pass(std::move(state), stages[s], params);
    else
      state = hierarchy_pass(std::move(state), stages[s], params);
    if (options.keep_snapshots)
      report.snapshots.push_back(
          {state.level, stages[s], map_entries(state.tracklets, destabilize, profile)});
  }
  return state;
}

}  // namespace

AdjacentPassResult adjacent_pass(std::span<const Detection> detections,
                                 const AssociationParams& params) {
  const auto sorted = sorted_detections(detections);
  const auto next = link_adjacent_frames(sorted, params.gate, [&](std::size_t a, std::size_t b) {
    return params.kernel(sorted[a].box, sorted[b].box);
  });
  AdjacentPassResult result;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (next[i] >= 0) result.matches.push_back({sorted[i], sorted[static_cast<std::size_t>(next[i])]});
  result.chains = chains_from_links(sorted, next);
  return result;
}

std::vector<Tracklet> consistent_motion_pass(std::span<const Tracklet> preliminary_chains,
                                             const AssociationParams& params) {
  std::vector<Detection> sorted;
  std::map<DetectionId, std::pair<MotionState, MotionState>> history;  // forward, backward
  for (const auto& chain : preliminary_chains) {
    const auto fwd = filter_history(chain.entries(), Direction::Forward, params.noise);
    const auto bwd = filter_history(chain.entries(), Direction::Backward, params.noise);
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const auto& d = chain.entries()[k];
      if (!history.emplace(d.det_id, std::make_pair(fwd[k], bwd[k])).second)
        throw Error("consistent_motion_pass: detection in two preliminary chains");
      sorted.push_back(d);
    }
  }
  std::sort(sorted.begin(), sorted.end(), detection_less);

  std::vector<const MotionState*> fwd(sorted.size()), bwd(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& h = history.at(sorted[i].det_id);
    fwd[i] = &h.first;
    bwd[i] = &h.second;
  }
  const auto next = link_adjacent_frames(sorted, params.gate, [&](std::size_t a, std::size_t b) {
    const double forward = params.kernel(predict(*fwd[a], sorted[b].frame), sorted[b].box);
    const double backward = params.kernel(predict(*bwd[b], sorted[a].frame), sorted[a].box);
    return std::max(forward, backward);
  });
  return chains_from_links(sorted, next);
}

HierarchyState byte_recovery(HierarchyState state, std::span<const Detection> low_score,
                             const AssociationParams& params) {
  if (low_score.empty() || state.tracklets.empty()) return state;
  std::multimap<FrameIndex, Detection> pool;
  for (const auto& d : low_score) pool.emplace(d.frame, d);
  auto& tracklets = state.tracklets;

  std::vector<std::optional<MotionState>> forward(tracklets.size()), backward(tracklets.size());
  while (!pool.empty()) {
    // Endpoint slots grouped by the frame they would extend into.
    struct Slot {
      std::size_t tracklet;
      bool tail;
      BoundingBox predicted;
    };
    std::map<FrameIndex, std::vector<Slot>> slots;
    for (std::size_t k = 0; k < tracklets.size(); ++k) {
      const Tracklet& t = tracklets[k];
      const FrameIndex after = t.t_max() + 1;
      if (pool.count(after)) {
        if (!forward[k]) forward[k] = fit(t, Direction::Forward, params.noise);
        slots[after].push_back({k, true, predict(*forward[k], after)});
      }
      const FrameIndex before = t.t_min() - 1;
      if (before >= 1 && pool.count(before)) {
        if (!backward[k]) backward[k] = fit(t, Direction::Backward, params.noise);
        slots[before].push_back({k, false, predict(*backward[k], before)});
      }
    }

    std::map<std::size_t, std::vector<Detection>> absorbed;
    std::vector<std::multimap<FrameIndex, Detection>::iterator> used;
    for (const auto& [frame, frame_slots] : slots) {
      auto [first, last] = pool.equal_range(frame);
      std::vector<std::multimap<FrameIndex, Detection>::iterator> cands;
      for (auto it = first; it != last; ++it) cands.push_back(it);
      std::sort(cands.begin(), cands.end(),
                [](auto a, auto b) { return a->second.det_id < b->second.det_id; });
      SimilarityMatrix m(frame_slots.size(), cands.size());
      for (std::size_t r = 0; r < frame_slots.size(); ++r)
        for (std::size_t c = 0; c < cands.size(); ++c)
          m.set(r, c, params.kernel(frame_slots[r].predicted, cands[c]->second.box));
      for (const auto& match : solve(m, params.gate)) {
        absorbed[frame_slots[match.row].tracklet].push_back(cands[match.col]->second);
        used.push_back(cands[match.col]);
      }
    }
    if (used.empty()) break;
    for (auto it : used) pool.erase(it);
    for (auto& [k, dets] : absorbed) {
      std::vector<Detection> entries = tracklets[k].entries();
      entries.insert(entries.end(), dets.begin(), dets.end());
      tracklets[k] = Tracklet(tracklets[k].id(), std::move(entries));
      forward[k].reset();
      backward[k].reset();
    }
  }
  // A head extension changes t_min, so restore the canonical order.
  std::sort(tracklets.begin(), tracklets.end(), tracklet_less);
  return state;
}

HierarchyState hierarchy_pass(HierarchyState state, const HierarchyStage& stage,
                              const AssociationParams& params) {
  return associate_level(std::move(state), stage, params, Scheduling::Interval);
}

HierarchyState window_strategy_pass(HierarchyState state, const HierarchyStage& stage,
                                    const AssociationParams& params) {
  return associate_level(std::move(state), stage, params, Scheduling::Window);
}

RunResult run(std::span<const Detection> detections, const TrackerConfig& cfg,
              const RunOptions& options) {
  validate_config(cfg);
  validate_detections(detections);
  RunResult result;
  if (detections.empty()) return result;
  check_single_class(detections);
  result.report.class_id = detections.front().class_id;
  const FrameIndex frame_count = last_frame(detections);
  result.report.camera = CameraProfile::stationary(frame_count);

  std::vector<Detection> high, low;
  for (const auto& d : detections) {
    if (d.score >= cfg.score_high)
      high.push_back(d);
    else if (d.score >= cfg.score_low)
      low.push_back(d);
  }
  if (high.empty()) return result;

  const auto params = AssociationParams::from_config(cfg);
  auto preliminary = adjacent_pass(high, params);

  CameraProfile& profile = result.report.camera;
  if (cfg.enable_cc) profile = estimate_camera(preliminary.matches, cfg.cc_threshold, frame_count);
  const bool moving = profile.moving;

  std::vector<Tracklet> level_one;
  if (cfg.enable_cm) {
    auto chains = moving ? map_entries(preliminary.chains, stabilize, profile)
                         : std::move(preliminary.chains);
    level_one = consistent_motion_pass(chains, params);
  } else if (moving) {
    level_one = adjacent_pass(stabilize(high, profile), params).chains;
  } else {
    level_one = std::move(preliminary.chains);
  }

  HierarchyState state;
  state.level = 1;
  state.counts = {high.size(), level_one.size()};
  state.tracklets = std::move(level_one);
  if (!low.empty())
    state = byte_recovery(std::move(state), moving ? stabilize(low, profile) : low, params);
  if (options.keep_snapshots)
    result.report.snapshots.push_back(
        {1, cfg.schedule.stages.front(), map_entries(state.tracklets, destabilize, profile)});

  state = run_levels(std::move(state), cfg, 1, params, profile, options, result.report);
  result.report.counts = state.counts;
  result.trajectories =
      to_trajectories(map_entries(state.tracklets, destabilize, profile), Provenance::Native);
  return result;
}

RunResult run_tracklets(std::vector<Tracklet> tracklets, const TrackerConfig& cfg,
                        const RunOptions& options) {
  validate_config(cfg);
  RunResult result;
  if (tracklets.empty()) return result;

  std::vector<Detection> all;
  std::vector<AdjacentMatch> matches;
  for (const auto& t : tracklets) {
    all.insert(all.end(), t.entries().begin(), t.entries().end());
    for (std::size_t k = 1; k < t.size(); ++k)
      if (t.entries()[k].frame == t.entries()[k - 1].frame + 1)
        matches.push_back({t.entries()[k - 1], t.entries()[k]});
  }
  validate_detections(all);
  check_single_class(all);
  result.report.class_id = all.front().class_id;
  const FrameIndex frame_count = last_frame(all);

  CameraProfile& profile = result.report.camera;
  profile = cfg.enable_cc ? estimate_camera(matches, cfg.cc_threshold, frame_count)
                          : CameraProfile::stationary(frame_count);

  HierarchyState state;
  state.tracklets = profile.moving ? map_entries(tracklets, stabilize, profile) : std::move(tracklets);
  std::sort(state.tracklets.begin(), state.tracklets.end(), tracklet_less);
  state.counts = {state.tracklets.size()};

  const auto params = AssociationParams::from_config(cfg);
  state = run_levels(std::move(state), cfg, 0, params, profile, options, result.report);
  result.report.counts = state.counts;
  result.trajectories =
      to_trajectories(map_entries(state.tracklets, destabilize, profile), Provenance::Recombined);
  return result;
}

namespace {

SequenceResult merge_class_results(std::vector<RunResult> runs) {
  SequenceResult out;
  for (auto& r : runs) {
    out.trajectories.insert(out.trajectories.end(), std::make_move_iterator(r.trajectories.begin()),
                            std::make_move_iterator(r.trajectories.end()));
    out.reports.push_back(std::move(r.report));
  }
  relabel_trajectories(out.trajectories);
  return out;
}

}  // namespace

SequenceResult track_sequence(std::span<const Detection> detections, const TrackerConfig& cfg,
                              const RunOptions& options) {
  std::map<int, std::vector<Detection>> by_class;
  for (const auto& d : detections) by_class[d.class_id].push_back(d);
  std::vector<RunResult> runs;
  for (const auto& [cls, dets] : by_class) runs.push_back(run(dets, cfg, options));
  return merge_class_results(std::move(runs));
}

SequenceResult recombine_sequence(std::span<const Trajectory> trajectories,
                                  const TrackerConfig& cfg, const RunOptions& options) {
  std::map<int, std::vector<Tracklet>> by_class;
  for (auto& t : split_at_discontinuities(trajectories)) by_class[t.class_id()].push_back(std::move(t));
  std::vector<RunResult> runs;
  for (auto& [cls, tracklets] : by_class) runs.push_back(run_tracklets(std::move(tracklets), cfg, options));
  return merge_class_results(std::move(runs));
}

}  // namespace hit
