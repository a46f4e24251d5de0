#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config_io.hpp"

namespace {

// Flags that override TrackerConfig fields; applied after the config file.
struct ConfigFlags {
  std::string config_file;
  double match_threshold = 0.0;
  double ci_width = 0.0;
  double ci_scale = 0.0;
  double cc_threshold = 0.0;
  double score_high = 0.0;
  double score_low = 0.0;
  int interp_gap = 0;
  double smooth_sigma = 0.0;
  std::string strategy;
  std::uint64_t seed = 0;
  std::map<std::string, CLI::Option*> options;

  bool given(const std::string& name) const { return options.at(name)->count() > 0; }
};

void add_config_flags(CLI::App& app, ConfigFlags& f) {
  app.add_option("--config", f.config_file, "JSON config file (fields mirror the tracker config)")
      ->check(CLI::ExistingFile);
  auto& o = f.options;
  auto add = [&](CLI::Option* opt) { o[opt->get_name()] = opt; };
  add(app.add_option("--match-threshold", f.match_threshold, "similarity gate for every level"));
  add(app.add_option("--ci-width", f.ci_width, "boxes narrower than this are expanded"));
  add(app.add_option("--ci-scale", f.ci_scale, "expansion scaling factor"));
  add(app.add_option("--cc-threshold", f.cc_threshold, "mean matched IoU below this means a moving camera"));
  add(app.add_option("--score-high", f.score_high, "high-score detection threshold"));
  add(app.add_option("--score-low", f.score_low, "low-score detection threshold"));
  add(app.add_option("--interp-gap", f.interp_gap, "longest gap filled by --interp"));
  add(app.add_option("--smooth-sigma", f.smooth_sigma, "Gaussian sigma for --smooth"));
  add(app.add_option("--strategy", f.strategy, "hierarchy schedule: interval or window")
                  ->check(CLI::IsMember({"interval", "window"})));
  add(app.add_option("--seed", f.seed, "random seed (overrides HIT_SEED)"));
  add(app.add_flag("--hm-iou", "use height-modulated IoU"));
  add(app.add_flag("--no-ci", "disable box expansion for small boxes"));
  add(app.add_flag("--no-cc", "disable camera-motion compensation"));
  add(app.add_flag("--no-cm", "disable the motion-seeded adjacent pass"));
}

hit::TrackerConfig resolve_config(const ConfigFlags& f) {
  hit::TrackerConfig cfg;
  if (!f.config_file.empty()) hit::tools::apply_config_json(hit::tools::read_json_file(f.config_file), cfg);
  if (const char* env = std::getenv("HIT_SEED")) cfg.rng_seed = std::stoull(env);
  if (f.given("--match-threshold")) cfg.match_threshold = f.match_threshold;
  if (f.given("--ci-width")) cfg.ci_width_threshold = f.ci_width;
  if (f.given("--ci-scale")) cfg.ci_scaling_factor = f.ci_scale;
  if (f.given("--cc-threshold")) cfg.cc_threshold = f.cc_threshold;
  if (f.given("--score-high")) cfg.score_high = f.score_high;
  if (f.given("--score-low")) cfg.score_low = f.score_low;
  if (f.given("--interp-gap")) cfg.interpolation_max_gap = f.interp_gap;
  if (f.given("--smooth-sigma")) cfg.smoothing_sigma = f.smooth_sigma;
  if (f.given("--strategy"))
    cfg.schedule.strategy =
        f.strategy == "window" ? hit::ScheduleStrategy::Window : hit::ScheduleStrategy::Interval;
  if (f.given("--seed")) cfg.rng_seed = f.seed;
  if (f.given("--hm-iou")) cfg.use_hm_iou = true;
  if (f.given("--no-ci")) cfg.enable_ci = false;
  if (f.given("--no-cc")) cfg.enable_cc = false;
  if (f.given("--no-cm")) cfg.enable_cm = false;
  return hit::validate_config(cfg);
}

int env_workers() {
  if (const char* env = std::getenv("HIT_WORKERS")) return std::max(1, std::atoi(env));
  return 1;
}

struct TrackCommand {
  hit::tools::TrackOptions options;
  ConfigFlags flags;
  std::string format = "mot";
  std::string dump;
  int workers = 0;

  void add(CLI::App& sub, const char* input_flag, const char* input_help) {
    sub.add_option(input_flag, options.inputs, input_help)->required()->check(CLI::ExistingFile);
    sub.add_option("--out", options.out, "result file, or directory for several inputs")->required();
    sub.add_option("--format", format, "file format")->check(CLI::IsMember({"mot", "kitti"}));
    sub.add_option("--kitti-class", options.kitti_class, "keep only this KITTI class");
    sub.add_option("--dump-hierarchy", dump, "write per-level tracklet snapshots as JSON");
    sub.add_flag("--interp", options.interpolate, "fill short gaps by linear interpolation");
    sub.add_flag("--smooth", options.smooth, "Gaussian-smooth trajectories");
    sub.add_option("--workers", workers, "parallel sequences (overrides HIT_WORKERS)");
    add_config_flags(sub, flags);
  }

  hit::tools::TrackOptions resolve() {
    options.format = hit::tools::parse_format(format);
    if (!dump.empty()) options.dump_hierarchy = dump;
    options.workers = workers > 0 ? workers : env_workers();
    options.config = resolve_config(flags);
    return options;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical IoU multi-object tracker"};
  app.require_subcommand(1);

  TrackCommand track;
  auto* track_cmd = app.add_subcommand("track", "track detections");
  track.add(*track_cmd, "--det", "detection file(s)");

  TrackCommand refine;
  auto* refine_cmd = app.add_subcommand("refine", "split tracker results at gaps and recombine them");
  refine.add(*refine_cmd, "--in", "tracker result file(s)");

  hit::tools::EvalOptions eval;
  std::string eval_format = "mot";
  auto* eval_cmd = app.add_subcommand("eval", "CLEAR-MOT and identity metrics");
  eval_cmd->add_option("--gt", eval.gt, "ground-truth file(s)")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--pred", eval.pred, "prediction file(s), paired with --gt in order")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--format", eval_format, "file format")->check(CLI::IsMember({"mot", "kitti"}));
  eval_cmd->add_option("--kitti-class", eval.kitti_class, "keep only this KITTI class");
  eval_cmd->add_option("--iou", eval.iou_threshold, "IoU threshold for a match")
      ->check(CLI::Range(0.0, 1.0));

  hit::tools::SynthOptions synth;
  std::uint64_t synth_seed = 0;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic scene");
  synth_cmd->add_option("--spec", synth.spec, "scenario JSON")->required()->check(CLI::ExistingFile);
  synth_cmd->add_option("--out-dir", synth.out_dir, "output directory")->required();
  auto* seed_opt = synth_cmd->add_option("--seed", synth_seed, "override the scenario seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*track_cmd) {
      hit::tools::cmd_track(track.resolve(), std::cout);
    } else if (*refine_cmd) {
      hit::tools::cmd_refine(refine.resolve(), std::cout);
    } else if (*eval_cmd) {
      eval.format = hit::tools::parse_format(eval_format);
      hit::tools::cmd_eval(eval, std::cout);
    } else if (*synth_cmd) {
      if (seed_opt->count() > 0)
        synth.seed = synth_seed;
      else if (const char* env = std::getenv("HIT_SEED"))
        synth.seed = std::stoull(env);
      hit::tools::cmd_synth(synth, std::cout);
    }
  } catch (const hit::InvalidConfig& e) {
    std::cerr << "hit: invalid configuration\n";
    for (const auto& issue : e.issues()) std::cerr << "  " << issue.field << ": " << issue.message << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "hit: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
