#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hit/config.hpp"

namespace hit::tools {

enum class FileFormat { Mot, Kitti };

FileFormat parse_format(const std::string& name);

/// When `inputs` has more than one entry, `out` (and `dump_hierarchy`) name
/// directories and each sequence is written to `<dir>/<input filename>`.
struct TrackOptions {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path out;
  FileFormat format = FileFormat::Mot;
  std::string kitti_class;  // empty keeps all classes
  std::optional<std::filesystem::path> dump_hierarchy;
  bool interpolate = false;
  bool smooth = false;
  int workers = 1;
  TrackerConfig config;
};

struct EvalOptions {
  std::vector<std::filesystem::path> gt;
  std::vector<std::filesystem::path> pred;
  FileFormat format = FileFormat::Mot;
  std::string kitti_class;
  double iou_threshold = 0.5;
};

struct SynthOptions {
  std::filesystem::path spec;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
};

/// Tracks every input; prints a per-sequence summary to `log`.
void cmd_track(const TrackOptions& options, std::ostream& log);

/// Splits tracker results at discontinuities and recombines them.
void cmd_refine(const TrackOptions& options, std::ostream& log);

void cmd_eval(const EvalOptions& options, std::ostream& out);

/// Writes `gt.txt` (visible ground truth) and `det.txt` into `out_dir`.
void cmd_synth(const SynthOptions& options, std::ostream& log);

}  // namespace hit::tools
