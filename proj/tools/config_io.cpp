#include "config_io.hpp"

#include <fstream>
#include <set>

namespace hit::tools {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j.is_object()) throw Error(context_ + ": expected a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    known_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw Error(context_ + "." + key + ": " + e.what());
    }
  }

  const json* find(const char* key) {
    known_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void reject_unknown() const {
    for (const auto& [key, _] : j_.items())
      if (!known_.count(key)) throw Error(context_ + ": unknown key '" + key + "'");
  }

  const std::string& context() const { return context_; }

 private:
  const json& j_;
  std::string context_;
  std::set<std::string> known_;
};

ScheduleStrategy parse_strategy(const std::string& s) {
  if (s == "interval") return ScheduleStrategy::Interval;
  if (s == "window") return ScheduleStrategy::Window;
  throw Error("unknown schedule strategy '" + s + "' (expected interval or window)");
}

MotionModel parse_motion(const std::string& s) {
  if (s == "linear") return MotionModel::Linear;
  if (s == "sinusoidal") return MotionModel::Sinusoidal;
  if (s == "crossing") return MotionModel::Crossing;
  throw Error("unknown motion model '" + s + "' (expected linear, sinusoidal or crossing)");
}

void read_pair(const json* node, const std::string& name, double& a, double& b) {
  if (!node) return;
  if (!node->is_array() || node->size() != 2 || !(*node)[0].is_number() || !(*node)[1].is_number())
    throw Error(name + ": expected [number, number]");
  a = (*node)[0].get<double>();
  b = (*node)[1].get<double>();
}

}  // namespace

void apply_config_json(const json& j, TrackerConfig& cfg) {
  Reader r(j, "config");
  r.get("match_threshold", cfg.match_threshold);
  r.get("ci_width_threshold", cfg.ci_width_threshold);
  r.get("ci_scaling_factor", cfg.ci_scaling_factor);
  r.get("cc_threshold", cfg.cc_threshold);
  r.get("score_high", cfg.score_high);
  r.get("score_low", cfg.score_low);
  r.get("use_hm_iou", cfg.use_hm_iou);
  r.get("enable_ci", cfg.enable_ci);
  r.get("enable_cc", cfg.enable_cc);
  r.get("enable_cm", cfg.enable_cm);
  r.get("interpolation_max_gap", cfg.interpolation_max_gap);
  r.get("smoothing_sigma", cfg.smoothing_sigma);
  r.get("rng_seed", cfg.rng_seed);
  if (const json* noise = r.find("motion_noise")) {
    Reader n(*noise, "config.motion_noise");
    n.get("position", cfg.motion_noise.position);
    n.get("velocity", cfg.motion_noise.velocity);
    n.reject_unknown();
  }
  if (const json* sched = r.find("schedule")) {
    Reader s(*sched, "config.schedule");
    std::string strategy;
    s.get("strategy", strategy);
    if (!strategy.empty()) cfg.schedule.strategy = parse_strategy(strategy);
    if (const json* stages = s.find("stages")) {
      if (!stages->is_array()) throw Error("config.schedule.stages: expected an array");
      cfg.schedule.stages.clear();
      for (const auto& st : *stages) {
        HierarchyStage stage;
        Reader sr(st, "config.schedule.stages[]");
        sr.get("interval_bound", stage.interval_bound);
        sr.get("overlap_allowance", stage.overlap_allowance);
        sr.reject_unknown();
        cfg.schedule.stages.push_back(stage);
      }
    }
    s.reject_unknown();
  }
  r.reject_unknown();
}

json config_to_json(const TrackerConfig& cfg) {
  json stages = json::array();
  for (const auto& s : cfg.schedule.stages)
    stages.push_back({{"interval_bound", s.interval_bound}, {"overlap_allowance", s.overlap_allowance}});
  return {
      {"match_threshold", cfg.match_threshold},
      {"ci_width_threshold", cfg.ci_width_threshold},
      {"ci_scaling_factor", cfg.ci_scaling_factor},
      {"cc_threshold", cfg.cc_threshold},
      {"score_high", cfg.score_high},
      {"score_low", cfg.score_low},
      {"use_hm_iou", cfg.use_hm_iou},
      {"enable_ci", cfg.enable_ci},
      {"enable_cc", cfg.enable_cc},
      {"enable_cm", cfg.enable_cm},
      {"schedule",
       {{"strategy", cfg.schedule.strategy == ScheduleStrategy::Window ? "window" : "interval"},
        {"stages", stages}}},
      {"interpolation_max_gap", cfg.interpolation_max_gap},
      {"smoothing_sigma", cfg.smoothing_sigma},
      {"motion_noise", {{"position", cfg.motion_noise.position}, {"velocity", cfg.motion_noise.velocity}}},
      {"rng_seed", cfg.rng_seed},
  };
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

ScenarioSpec scenario_from_json(const json& j) {
  ScenarioSpec spec;
  Reader r(j, "scenario");
  r.get("n_targets", spec.n_targets);
  r.get("n_frames", spec.n_frames);
  std::string motion;
  r.get("motion", motion);
  if (!motion.empty()) spec.motion = parse_motion(motion);
  if (const json* misses = r.find("misses")) {
    if (!misses->is_array()) throw Error("scenario.misses: expected an array");
    for (const auto& m : *misses) {
      MissInterval mi;
      Reader mr(m, "scenario.misses[]");
      mr.get("target", mi.target);
      mr.get("first", mi.first);
      mr.get("last", mi.last);
      mr.reject_unknown();
      spec.misses.push_back(mi);
    }
  }
  r.get("miss_probability", spec.miss_probability);
  r.get("noise_sigma", spec.noise_sigma);
  r.get("size_noise_sigma", spec.size_noise_sigma);
  r.get("base_score", spec.base_score);
  if (const json* dips = r.find("score_dips")) {
    if (!dips->is_array()) throw Error("scenario.score_dips: expected an array");
    for (const auto& d : *dips) {
      ScoreDip dip;
      Reader dr(d, "scenario.score_dips[]");
      dr.get("target", dip.target);
      dr.get("first", dip.first);
      dr.get("last", dip.last);
      dr.get("score", dip.score);
      dr.reject_unknown();
      spec.score_dips.push_back(dip);
    }
  }
  read_pair(r.find("pan"), "scenario.pan", spec.pan_x, spec.pan_y);
  read_pair(r.find("width"), "scenario.width", spec.min_width, spec.max_width);
  read_pair(r.find("image"), "scenario.image", spec.image_width, spec.image_height);
  r.get("aspect", spec.aspect);
  r.get("max_speed", spec.max_speed);
  r.get("sine_amplitude", spec.sine_amplitude);
  r.get("sine_period", spec.sine_period);
  r.get("crossing_speed", spec.crossing_speed);
  r.get("crossing_gap", spec.crossing_gap);
  r.get("separation_margin", spec.separation_margin);
  r.get("require_inside", spec.require_inside);
  r.get("seed", spec.seed);
  r.reject_unknown();
  return spec;
}

json hierarchy_dump(const std::string& sequence, const std::vector<RunReport>& reports) {
  json classes = json::array();
  for (const auto& rep : reports) {
    json offsets = json::array();
    for (const auto& o : rep.camera.per_frame) offsets.push_back({o.x, o.y});
    json levels = json::array();
    for (const auto& snap : rep.snapshots) {
      json tracklets = json::array();
      for (const auto& t : snap.tracklets) {
        json frames = json::array(), det_ids = json::array();
        for (const auto& d : t.entries()) {
          frames.push_back(d.frame);
          det_ids.push_back(d.det_id);
        }
        tracklets.push_back({{"id", t.id()}, {"frames", frames}, {"det_ids", det_ids}});
      }
      levels.push_back({{"level", snap.level},
                        {"interval_bound", snap.stage.interval_bound},
                        {"overlap_allowance", snap.stage.overlap_allowance},
                        {"tracklets", tracklets}});
    }
    classes.push_back({{"class_id", rep.class_id},
                       {"camera",
                        {{"mean_match_iou", rep.camera.mean_match_iou},
                         {"moving", rep.camera.moving},
                         {"match_count", rep.camera.match_count},
                         {"per_frame_offsets", offsets}}},
                       {"counts", rep.counts},
                       {"levels", levels}});
  }
  return {{"sequence", sequence}, {"classes", classes}};
}

}  // namespace hit::tools
