#include "commands.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "config_io.hpp"
#include "hit/hierarchy.hpp"
#include "hit/metrics.hpp"
#include "hit/mot_io.hpp"
#include "hit/synth.hpp"

namespace hit::tools {

namespace fs = std::filesystem;

FileFormat parse_format(const std::string& name) {
  if (name == "mot") return FileFormat::Mot;
  if (name == "kitti") return FileFormat::Kitti;
  throw Error("unknown format '" + name + "' (expected mot or kitti)");
}

namespace {

struct SequenceOutput {
  std::string name;
  std::vector<Trajectory> trajectories;
  KittiExtras extras;
  std::string summary;
  std::optional<nlohmann::json> dump;
};

// Runs `work` on every index with up to `workers` threads. Errors are
// rethrown in input order once all workers have finished.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& work) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    loop();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(loop);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string describe(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << v;
  return s.str();
}

std::string run_summary(const std::string& name, FrameIndex frames, std::size_t detections,
                      const SequenceResult& result) {
  std::ostringstream s;
  s << name << ": frames=" << frames << " detections=" << detections
    << " trajectories=" << result.trajectories.size() << '\n';
  for (const auto& r : result.reports) {
    s << name << ": class " << r.class_id << " O_k=" << describe(r.camera.mean_match_iou)
      << " camera=" << (r.camera.moving ? "moving" : "static")
      << " matches=" << r.camera.match_count << '\n';
    s << name << ": class " << r.class_id << " N_l =";
    for (std::size_t k = 0; k < r.counts.size(); ++k) s << (k ? " -> " : " ") << r.counts[k];
    s << '\n';
  }
  return s.str();
}

std::vector<Trajectory> postprocess(std::vector<Trajectory> trajectories, const TrackOptions& options) {
  for (auto& t : trajectories) {
    if (options.interpolate) t = interpolate(t, options.config.interpolation_max_gap);
    if (options.smooth) t = gaussian_smooth(t, options.config.smoothing_sigma);
  }
  return trajectories;
}

fs::path output_path(const TrackOptions& options, std::size_t i) {
  if (options.inputs.size() == 1) return options.out;
  return options.out / options.inputs[i].filename();
}

fs::path dump_path(const TrackOptions& options, std::size_t i) {
  if (options.inputs.size() == 1) return *options.dump_hierarchy;
  return *options.dump_hierarchy / (options.inputs[i].stem().string() + ".json");
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_outputs(const TrackOptions& options, const std::vector<SequenceOutput>& outputs,
                   std::ostream& log) {
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto& o = outputs[i];
    const fs::path out = output_path(options, i);
    ensure_parent(out);
    if (options.format == FileFormat::Kitti)
      write_kitti_tracking(o.trajectories, out, o.extras);
    else
      write_mot_results(o.trajectories, out);
    if (o.dump) {
      const fs::path dp = dump_path(options, i);
      ensure_parent(dp);
      std::ofstream f(dp, std::ios::binary | std::ios::trunc);
      if (!f) throw Error("cannot write " + dp.string());
      f << o.dump->dump(2) << '\n';
    }
    log << o.summary;
  }
}

template <typename Fn>
void run_sequences(const TrackOptions& options, std::ostream& log, Fn&& process) {
  if (options.inputs.empty()) throw Error("no input files");
  validate_config(options.config);
  std::vector<SequenceOutput> outputs(options.inputs.size());
  parallel_for(options.inputs.size(), options.workers, [&](std::size_t i) {
    try {
      outputs[i] = process(options.inputs[i]);
    } catch (const std::exception& e) {
      throw Error(options.inputs[i].string() + ": " + e.what());
    }
  });
  write_outputs(options, outputs, log);
}

}  // namespace

void cmd_track(const TrackOptions& options, std::ostream& log) {
  const RunOptions run_options{options.dump_hierarchy.has_value()};
  run_sequences(options, log, [&](const fs::path& input) {
    SequenceOutput o;
    SequenceBundle bundle;
    if (options.format == FileFormat::Kitti) {
      auto seq = read_kitti_tracking(input, options.kitti_class);
      bundle = std::move(seq.bundle);
      o.extras = std::move(seq.extras);
    } else {
      bundle = read_mot_detections(input);
    }
    o.name = bundle.name;
    auto result = track_sequence(bundle.detections, options.config, run_options);
    o.summary = run_summary(o.name, bundle.frame_count, bundle.detections.size(), result);
    if (run_options.keep_snapshots) o.dump = hierarchy_dump(o.name, result.reports);
    o.trajectories = postprocess(std::move(result.trajectories), options);
    return o;
  });
}

void cmd_refine(const TrackOptions& options, std::ostream& log) {
  const RunOptions run_options{options.dump_hierarchy.has_value()};
  run_sequences(options, log, [&](const fs::path& input) {
    SequenceOutput o;
    o.name = input.stem().string();
    std::vector<Trajectory> tracks;
    if (options.format == FileFormat::Kitti) {
      auto seq = read_kitti_tracking(input, options.kitti_class);
      tracks = kitti_tracks(seq);
      o.extras = std::move(seq.extras);
    } else {
      tracks = read_mot_tracks(input);
    }
    std::size_t entries = 0;
    FrameIndex frames = 0;
    for (const auto& t : tracks) {
      entries += t.entries.size();
      frames = std::max(frames, t.t_max());
    }
    auto result = recombine_sequence(tracks, options.config, run_options);
    o.summary = run_summary(o.name, frames, entries, result);
    if (run_options.keep_snapshots) o.dump = hierarchy_dump(o.name, result.reports);
    o.trajectories = postprocess(std::move(result.trajectories), options);
    return o;
  });
}

void cmd_eval(const EvalOptions& options, std::ostream& out) {
  if (options.gt.size() != options.pred.size())
    throw Error("got " + std::to_string(options.gt.size()) + " ground-truth file(s) but " +
                std::to_string(options.pred.size()) + " prediction file(s)");
  if (options.gt.empty()) throw Error("no input files");
  auto load = [&](const fs::path& p, bool gt) {
    if (options.format == FileFormat::Kitti) return kitti_tracks(read_kitti_tracking(p, options.kitti_class));
    return read_mot_tracks(p, gt);
  };
  std::vector<SequenceEval> sequences;
  for (std::size_t i = 0; i < options.gt.size(); ++i) {
    const auto gt = load(options.gt[i], true);
    const auto pred = load(options.pred[i], false);
    sequences.push_back(evaluate_sequence(options.pred[i].stem().string(), gt, pred, options.iou_threshold));
  }
  const EvalReport report = summarize(std::move(sequences));
  out << format_report_text(report) << '\n' << format_report_kv(report);
}

void cmd_synth(const SynthOptions& options, std::ostream& log) {
  ScenarioSpec spec = scenario_from_json(read_json_file(options.spec));
  if (options.seed) spec.seed = *options.seed;
  const Scenario scenario = generate(spec);
  fs::create_directories(options.out_dir);
  write_mot_results(visible_ground_truth(scenario, spec), options.out_dir / "gt.txt");
  write_mot_detections(scenario.detections, options.out_dir / "det.txt");
  log << "synth: targets=" << spec.n_targets << " frames=" << spec.n_frames
      << " detections=" << scenario.detections.size() << " seed=" << spec.seed << '\n';
}

}  // namespace hit::tools
