#include "hit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>

namespace hit {

namespace {

// mt19937_64 is specified bit-exactly by the standard; the distributions are
// not, so uniform and normal draws are derived by hand to keep output
// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  std::size_t index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

 private:
  std::mt19937_64 engine_;
};

struct Path {
  double x0 = 0.0, y0 = 0.0;
  double vx = 0.0, vy = 0.0;
  double w = 1.0, h = 1.0;
  double phase = 0.0;
};

BoundingBox box_at(const Path& p, const ScenarioSpec& spec, FrameIndex t) {
  const double k = static_cast<double>(t - 1);
  double x = p.x0 + p.vx * k + spec.pan_x * k;
  double y = p.y0 + p.vy * k + spec.pan_y * k;
  if (spec.motion == MotionModel::Sinusoidal)
    y += spec.sine_amplitude * std::sin(2.0 * std::numbers::pi * k / spec.sine_period + p.phase);
  return {x, y, p.w, p.h};
}

bool visible(const BoundingBox& b, const ScenarioSpec& spec) {
  return b.right() > 0.0 && b.left() < spec.image_width && b.bottom() > 0.0 &&
         b.top() < spec.image_height;
}

bool inside(const BoundingBox& b, const ScenarioSpec& spec) {
  return b.left() >= 0.0 && b.right() <= spec.image_width && b.top() >= 0.0 &&
         b.bottom() <= spec.image_height;
}

bool separated(const BoundingBox& a, const BoundingBox& b, double margin) {
  const double gap_x = std::max(a.left() - b.right(), b.left() - a.right());
  const double gap_y = std::max(a.top() - b.bottom(), b.top() - a.bottom());
  return std::max(gap_x, gap_y) >= margin;
}

void check_spec(const ScenarioSpec& s) {
  auto fail = [](const std::string& what) { throw Error("invalid scenario: " + what); };
  if (s.n_targets < 0) fail("n_targets must be >= 0");
  if (s.n_frames < 1) fail("n_frames must be >= 1");
  if (!(s.min_width > 0.0) || !(s.max_width >= s.min_width)) fail("need 0 < min_width <= max_width");
  if (!(s.aspect > 0.0)) fail("aspect must be > 0");
  if (!(s.max_speed >= 0.0)) fail("max_speed must be >= 0");
  if (!(s.miss_probability >= 0.0 && s.miss_probability <= 1.0))
    fail("miss_probability must be in [0, 1]");
  if (!(s.base_score >= 0.0 && s.base_score <= 1.0)) fail("base_score must be in [0, 1]");
  if (!(s.noise_sigma >= 0.0) || !(s.size_noise_sigma >= 0.0)) fail("noise sigmas must be >= 0");
  if (!(s.image_width > 0.0 && s.image_height > 0.0)) fail("image size must be positive");
  if (s.motion == MotionModel::Sinusoidal && !(s.sine_period > 0.0)) fail("sine_period must be > 0");
  if (s.motion == MotionModel::Crossing && s.n_targets % 2 != 0)
    fail("crossing scenes need an even number of targets");
  if (!(s.crossing_speed > 0.0) || !(s.crossing_gap >= 0.0)) fail("need crossing_speed > 0 and crossing_gap >= 0");
  for (const auto& m : s.misses)
    if (m.target < 0 || m.target >= s.n_targets || m.first > m.last)
      fail("bad miss interval for target " + std::to_string(m.target));
  for (const auto& d : s.score_dips)
    if (d.target < 0 || d.target >= s.n_targets || d.first > d.last || !(d.score >= 0.0 && d.score <= 1.0))
      fail("bad score dip for target " + std::to_string(d.target));
}

std::vector<Path> crossing_paths(const ScenarioSpec& spec, Rng& rng) {
  std::vector<Path> paths;
  const int pairs = spec.n_targets / 2;
  const double row = 2.0 * spec.aspect * spec.max_width + std::max(spec.separation_margin, 0.0);
  const double c = static_cast<double>(std::max(spec.n_frames / 2, 1) - 1);
  for (int k = 0; k < pairs; ++k) {
    const double w = rng.uniform(spec.min_width, spec.max_width);
    const double h = spec.aspect * w;
    const double v = spec.crossing_speed * w;
    const double half_gap = 0.5 * spec.crossing_gap * w;
    const double x_mid = rng.uniform(0.25, 0.75) * spec.image_width;
    const double y = row * (0.5 + k);
    paths.push_back({x_mid - half_gap - v * c, y, v, 0.0, w, h, 0.0});
    paths.push_back({x_mid + half_gap + v * c, y, -v, 0.0, w, h, 0.0});
  }
  return paths;
}

std::vector<Path> random_paths(const ScenarioSpec& spec, Rng& rng) {
  constexpr int kAttempts = 10000;
  std::vector<Path> paths;
  for (int i = 0; i < spec.n_targets; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kAttempts && !placed; ++attempt) {
      Path p;
      p.w = rng.uniform(spec.min_width, spec.max_width);
      p.h = spec.aspect * p.w;
      p.x0 = rng.uniform(p.w / 2.0, std::max(p.w / 2.0, spec.image_width - p.w / 2.0));
      p.y0 = rng.uniform(p.h / 2.0, std::max(p.h / 2.0, spec.image_height - p.h / 2.0));
      p.vx = rng.uniform(-spec.max_speed, spec.max_speed);
      p.vy = rng.uniform(-spec.max_speed, spec.max_speed);
      p.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      placed = true;
      for (FrameIndex t = 1; t <= spec.n_frames && placed; ++t) {
        const BoundingBox b = box_at(p, spec, t);
        if (spec.require_inside && !inside(b, spec)) placed = false;
        if (spec.separation_margin >= 0.0)
          for (const auto& q : paths)
            if (!separated(b, box_at(q, spec, t), spec.separation_margin)) {
              placed = false;
              break;
            }
      }
      if (placed) paths.push_back(p);
    }
    if (!placed)
      throw Error("could not place target " + std::to_string(i) + " after " +
                  std::to_string(kAttempts) + " attempts");
  }
  return paths;
}

bool in_interval(int target, FrameIndex t, int itarget, FrameIndex first, FrameIndex last) {
  return target == itarget && t >= first && t <= last;
}

}  // namespace

Scenario generate(const ScenarioSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);
  const std::vector<Path> paths =
      spec.motion == MotionModel::Crossing ? crossing_paths(spec, rng) : random_paths(spec, rng);

  Scenario out;
  DetectionId gt_id = 0;
  for (int i = 0; i < spec.n_targets; ++i) {
    Trajectory t{i + 1, {}, Provenance::Native};
    bool ever_visible = false;
    for (FrameIndex f = 1; f <= spec.n_frames; ++f) {
      Detection d;
      d.frame = f;
      d.box = box_at(paths[static_cast<std::size_t>(i)], spec, f);
      d.det_id = gt_id++;
      ever_visible = ever_visible || visible(d.box, spec);
      t.entries.push_back(d);
    }
    if (!ever_visible) throw Error("target " + std::to_string(i) + " is never inside the image");
    out.ground_truth.push_back(std::move(t));
  }

  for (FrameIndex f = 1; f <= spec.n_frames; ++f) {
    std::vector<std::pair<Detection, int>> frame;
    for (int i = 0; i < spec.n_targets; ++i) {
      const BoundingBox gt = out.ground_truth[static_cast<std::size_t>(i)].entries[static_cast<std::size_t>(f - 1)].box;
      if (!visible(gt, spec)) continue;
      const bool scheduled_miss = std::any_of(spec.misses.begin(), spec.misses.end(), [&](const MissInterval& m) {
        return in_interval(i, f, m.target, m.first, m.last);
      });
      if (scheduled_miss) continue;
      if (spec.miss_probability > 0.0 && rng.uniform() < spec.miss_probability) continue;
      Detection d;
      d.frame = f;
      d.box = gt;
      if (spec.noise_sigma > 0.0) {
        d.box.cx += spec.noise_sigma * rng.normal();
        d.box.cy += spec.noise_sigma * rng.normal();
      }
      if (spec.size_noise_sigma > 0.0) {
        d.box.w *= std::exp(spec.size_noise_sigma * rng.normal());
        d.box.h *= std::exp(spec.size_noise_sigma * rng.normal());
      }
      d.score = spec.base_score;
      for (const auto& dip : spec.score_dips)
        if (in_interval(i, f, dip.target, dip.first, dip.last)) d.score = dip.score;
      frame.emplace_back(d, i);
    }
    for (std::size_t k = frame.size(); k > 1; --k) std::swap(frame[k - 1], frame[rng.index(k)]);
    for (auto& [d, target] : frame) {
      d.det_id = static_cast<DetectionId>(out.detections.size());
      out.detections.push_back(d);
      out.detection_target.push_back(target);
    }
  }
  return out;
}

std::vector<Trajectory> visible_ground_truth(const Scenario& scenario, const ScenarioSpec& spec) {
  std::vector<Trajectory> out;
  for (const auto& t : scenario.ground_truth) {
    Trajectory v{t.track_id, {}, t.provenance};
    for (const auto& d : t.entries)
      if (visible(d.box, spec)) v.entries.push_back(d);
    if (!v.entries.empty()) out.push_back(std::move(v));
  }
  return out;
}

std::vector<Trajectory> observed_ground_truth(const Scenario& scenario) {
  std::map<int, std::vector<FrameIndex>> frames;
  for (std::size_t k = 0; k < scenario.detections.size(); ++k)
    frames[scenario.detection_target[k]].push_back(scenario.detections[k].frame);
  std::vector<Trajectory> out;
  for (auto& [target, list] : frames) {
    std::sort(list.begin(), list.end());
    const auto& gt = scenario.ground_truth[static_cast<std::size_t>(target)];
    Trajectory o{gt.track_id, {}, gt.provenance};
    for (const FrameIndex f : list) o.entries.push_back(gt.entries[static_cast<std::size_t>(f - gt.t_min())]);
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<Trajectory> corrupt_at_gaps(std::span<const Trajectory> tracks, std::uint64_t seed) {
  Rng rng(seed);
  struct Run {
    std::size_t track;
    std::vector<Detection> entries;
  };
  std::vector<Run> later_runs;
  std::map<int, std::vector<Detection>> by_id;
  int next_id = 1;
  for (const auto& t : tracks) next_id = std::max(next_id, t.track_id + 1);
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    validate_trajectory(tracks[i]);
    std::vector<Detection> run;
    bool first = true;
    auto flush = [&] {
      if (first) {
        auto& dst = by_id[tracks[i].track_id];
        dst.insert(dst.end(), run.begin(), run.end());
      } else {
        later_runs.push_back({i, run});
      }
      first = false;
      run.clear();
    };
    for (const auto& d : tracks[i].entries) {
      if (!run.empty() && d.frame != run.back().frame + 1) flush();
      run.push_back(d);
    }
    flush();
  }
  std::stable_sort(later_runs.begin(), later_runs.end(), [](const Run& a, const Run& b) {
    return a.entries.front().frame < b.entries.front().frame;
  });

  for (auto& run : later_runs) {
    const FrameIndex lo = run.entries.front().frame - 1;
    const FrameIndex hi = run.entries.back().frame + 1;
    int target_id = next_id;
    if (rng.uniform() < 0.5) {
      std::vector<int> candidates;
      for (const auto& [id, entries] : by_id) {
        if (id == tracks[run.track].track_id) continue;
        const bool clash = std::any_of(entries.begin(), entries.end(), [&](const Detection& d) {
          return d.frame >= lo && d.frame <= hi;
        });
        if (!clash) candidates.push_back(id);
      }
      if (!candidates.empty()) target_id = candidates[rng.index(candidates.size())];
    }
    if (target_id == next_id) ++next_id;
    auto& dst = by_id[target_id];
    dst.insert(dst.end(), run.entries.begin(), run.entries.end());
  }

  std::vector<Trajectory> out;
  for (auto& [id, entries] : by_id) {
    std::sort(entries.begin(), entries.end(), detection_less);
    out.push_back({id, std::move(entries), Provenance::Native});
  }
  return out;
}

}  // namespace hit
