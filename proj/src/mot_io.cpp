#include "hit/mot_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

namespace hit {

ParseError::ParseError(const std::filesystem::path& path, std::size_t line, const std::string& what)
    : Error(path.string() + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

class LineParser {
 public:
  LineParser(const std::filesystem::path& path, std::size_t line) : path_(path), line_(line) {}

  double number(std::string_view field, const char* name) const {
    double v = 0.0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
      fail(std::string("field '") + name + "' is not a number: '" + std::string(field) + "'");
    return v;
  }

  int integer(std::string_view field, const char* name) const {
    const double v = number(field, name);
    if (v != std::floor(v) || std::abs(v) > 1e9)
      fail(std::string("field '") + name + "' is not an integer: '" + std::string(field) + "'");
    return static_cast<int>(v);
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(path_, line_, what); }

 private:
  const std::filesystem::path& path_;
  std::size_t line_;
};

template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_input(path);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    fn(line, line_no);
  }
}

struct MotRow {
  FrameIndex frame;
  int id;
  BoundingBox box;
  double conf;
  std::vector<std::string_view> fields;
};

// Returns nullopt for rows with non-positive size.
std::optional<MotRow> parse_mot_row(std::string_view line, const LineParser& p) {
  auto fields = split_csv(line);
  if (fields.size() < 7 || fields.size() > 10)
    p.fail("expected 7 to 10 comma-separated fields, got " + std::to_string(fields.size()));
  MotRow row;
  row.frame = p.integer(fields[0], "frame");
  if (row.frame < 1) p.fail("frame must be >= 1");
  row.id = p.integer(fields[1], "id");
  const double left = p.number(fields[2], "bb_left");
  const double top = p.number(fields[3], "bb_top");
  const double w = p.number(fields[4], "w");
  const double h = p.number(fields[5], "h");
  row.conf = p.number(fields[6], "conf");
  for (std::size_t k = 7; k < fields.size(); ++k) p.number(fields[k], "extra");
  row.fields = std::move(fields);
  if (!(w > 0.0 && h > 0.0)) return std::nullopt;
  row.box = BoundingBox::from_corners(left, top, w, h);
  return row;
}

void warn_rejected(const std::filesystem::path& path, const ReadStats& stats) {
  if (stats.rejected > 0)
    std::clog << path.string() << ": rejected " << stats.rejected
              << " record(s) with non-positive width or height\n";
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string s(buf);
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

SequenceBundle read_mot_detections(const std::filesystem::path& path) {
  SequenceBundle bundle;
  bundle.name = path.stem().string();
  for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    const LineParser p(path, line_no);
    const auto row = parse_mot_row(line, p);
    ++bundle.stats.records;
    if (!row) {
      ++bundle.stats.rejected;
      return;
    }
    Detection d;
    d.frame = row->frame;
    d.box = row->box;
    d.score = std::clamp(row->conf, 0.0, 1.0);
    d.class_id = 0;
    bundle.detections.push_back(d);
    bundle.frame_count = std::max(bundle.frame_count, d.frame);
  });
  assign_detection_ids(bundle.detections);
  warn_rejected(path, bundle.stats);
  return bundle;
}

std::vector<Trajectory> read_mot_tracks(const std::filesystem::path& path, bool ground_truth,
                                        ReadStats* stats) {
  ReadStats local;
  std::map<int, std::vector<Detection>> by_id;
  DetectionId next_id = 0;
  for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    const LineParser p(path, line_no);
    const auto row = parse_mot_row(line, p);
    ++local.records;
    if (!row) {
      ++local.rejected;
      return;
    }
    if (ground_truth && row->conf == 0.0) {
      ++local.skipped;
      return;
    }
    Detection d;
    d.frame = row->frame;
    d.box = row->box;
    d.score = std::clamp(row->conf, 0.0, 1.0);
    d.det_id = next_id++;
    auto& entries = by_id[row->id];
    if (std::any_of(entries.begin(), entries.end(), [&](const Detection& e) { return e.frame == d.frame; }))
      p.fail("track " + std::to_string(row->id) + " has two boxes in frame " + std::to_string(d.frame));
    entries.push_back(d);
  });
  std::vector<Trajectory> out;
  for (auto& [id, entries] : by_id) {
    std::sort(entries.begin(), entries.end(), detection_less);
    out.push_back({id, std::move(entries), Provenance::Native});
  }
  warn_rejected(path, local);
  if (stats) *stats = local;
  return out;
}

void write_mot_results(const std::vector<Trajectory>& trajectories,
                       const std::filesystem::path& path) {
  std::vector<std::pair<const Detection*, int>> rows;
  for (const auto& t : trajectories)
    for (const auto& d : t.entries) rows.emplace_back(&d, t.track_id);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first->frame, a.second) < std::tie(b.first->frame, b.second);
  });
  auto out = open_output(path);
  for (const auto& [d, id] : rows) {
    out << d->frame << ',' << id << ',' << format_number(d->box.left()) << ','
        << format_number(d->box.top()) << ',' << format_number(d->box.w) << ','
        << format_number(d->box.h) << ',' << format_number(d->score) << ",-1,-1,-1\n";
  }
  if (!out) throw Error("error writing " + path.string());
}

void write_mot_detections(const std::vector<Detection>& detections,
                          const std::filesystem::path& path) {
  std::vector<const Detection*> rows;
  for (const auto& d : detections) rows.push_back(&d);
  std::sort(rows.begin(), rows.end(),
            [](const Detection* a, const Detection* b) { return detection_less(*a, *b); });
  auto out = open_output(path);
  for (const Detection* d : rows) {
    out << d->frame << ",-1," << format_number(d->box.left()) << ',' << format_number(d->box.top())
        << ',' << format_number(d->box.w) << ',' << format_number(d->box.h) << ','
        << format_number(d->score) << ",-1,-1,-1\n";
  }
  if (!out) throw Error("error writing " + path.string());
}

const std::vector<std::string>& kitti_classes() {
  static const std::vector<std::string> classes = {"Car",     "Van",     "Truck", "Pedestrian",
                                                   "Person_sitting", "Cyclist", "Tram",  "Misc"};
  return classes;
}

int kitti_class_id(const std::string& type) {
  const auto& c = kitti_classes();
  const auto it = std::find(c.begin(), c.end(), type);
  return it == c.end() ? -1 : static_cast<int>(it - c.begin());
}

KittiSequence read_kitti_tracking(const std::filesystem::path& path,
                                  const std::string& class_filter) {
  KittiSequence seq;
  seq.bundle.name = path.stem().string();
  std::size_t unknown = 0;
  for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    const LineParser p(path, line_no);
    const auto f = split_ws(line);
    if (f.size() != 17 && f.size() != 18)
      p.fail("expected 17 or 18 whitespace-separated fields, got " + std::to_string(f.size()));
    ++seq.bundle.stats.records;
    const int frame = p.integer(f[0], "frame");
    if (frame < 0) p.fail("frame must be >= 0");
    const int track_id = p.integer(f[1], "track_id");
    const std::string type(f[2]);
    for (std::size_t k = 3; k < f.size(); ++k) p.number(f[k], "value");
    if (type == "DontCare") {
      ++seq.bundle.stats.skipped;
      return;
    }
    const int cls = kitti_class_id(type);
    if (cls < 0) {
      ++unknown;
      ++seq.bundle.stats.skipped;
      return;
    }
    if (!class_filter.empty() && type != class_filter) {
      ++seq.bundle.stats.skipped;
      return;
    }
    const double x1 = p.number(f[6], "x1"), y1 = p.number(f[7], "y1");
    const double x2 = p.number(f[8], "x2"), y2 = p.number(f[9], "y2");
    if (!(x2 > x1 && y2 > y1)) {
      ++seq.bundle.stats.rejected;
      return;
    }
    Detection d;
    d.frame = frame + 1;
    d.box = BoundingBox::from_ltrb(x1, y1, x2, y2);
    d.score = f.size() == 18 ? std::clamp(p.number(f[17], "score"), 0.0, 1.0) : 1.0;
    d.class_id = cls;
    d.det_id = static_cast<DetectionId>(seq.bundle.detections.size());
    seq.extras[d.det_id] = {std::string(f[3]),  std::string(f[4]),  std::string(f[5]),
                            std::string(f[10]), std::string(f[11]), std::string(f[12]),
                            std::string(f[13]), std::string(f[14]), std::string(f[15]),
                            std::string(f[16])};
    seq.bundle.detections.push_back(d);
    seq.track_ids.push_back(track_id);
    seq.bundle.frame_count = std::max(seq.bundle.frame_count, d.frame);
  });
  if (unknown > 0)
    std::clog << path.string() << ": skipped " << unknown << " row(s) with unknown object type\n";
  warn_rejected(path, seq.bundle.stats);
  return seq;
}

std::vector<Trajectory> kitti_tracks(const KittiSequence& sequence) {
  std::map<std::pair<int, int>, std::vector<Detection>> by_id;
  const auto& dets = sequence.bundle.detections;
  for (std::size_t i = 0; i < dets.size(); ++i)
    by_id[{dets[i].class_id, sequence.track_ids[i]}].push_back(dets[i]);
  std::vector<Trajectory> out;
  for (auto& [key, entries] : by_id) {
    std::sort(entries.begin(), entries.end(), detection_less);
    Trajectory t{key.second, std::move(entries), Provenance::Native};
    validate_trajectory(t);
    out.push_back(std::move(t));
  }
  return out;
}

void write_kitti_tracking(const std::vector<Trajectory>& trajectories,
                          const std::filesystem::path& path, const KittiExtras& extras) {
  static const std::vector<std::string> placeholder = {"-1", "-1",    "-10",   "-1",    "-1",
                                                       "-1", "-1000", "-1000", "-1000", "-10"};
  std::vector<std::pair<const Detection*, int>> rows;
  for (const auto& t : trajectories)
    for (const auto& d : t.entries) rows.emplace_back(&d, t.track_id);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first->frame, a.second) < std::tie(b.first->frame, b.second);
  });
  const auto& classes = kitti_classes();
  auto out = open_output(path);
  for (const auto& [d, id] : rows) {
    if (d->class_id < 0 || d->class_id >= static_cast<int>(classes.size()))
      throw Error("class id " + std::to_string(d->class_id) + " has no KITTI type");
    const auto it = d->interpolated ? extras.end() : extras.find(d->det_id);
    const auto& x = it == extras.end() ? placeholder : it->second;
    out << (d->frame - 1) << ' ' << id << ' ' << classes[static_cast<std::size_t>(d->class_id)]
        << ' ' << x[0] << ' ' << x[1] << ' ' << x[2] << ' ' << format_number(d->box.left()) << ' '
        << format_number(d->box.top()) << ' ' << format_number(d->box.right()) << ' '
        << format_number(d->box.bottom()) << ' ' << x[3] << ' ' << x[4] << ' ' << x[5] << ' '
        << x[6] << ' ' << x[7] << ' ' << x[8] << ' ' << x[9] << ' ' << format_number(d->score)
        << '\n';
  }
  if (!out) throw Error("error writing " + path.string());
}

}  // namespace hit
