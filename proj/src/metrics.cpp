#include "hit/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "hit/assignment.hpp"
#include "hit/geometry.hpp"

namespace hit {

double ClearCounts::mota() const {
  if (gt_count == 0) return false_positives == 0 ? 1.0 : 0.0;
  return 1.0 - static_cast<double>(false_positives + false_negatives + id_switches) /
                   static_cast<double>(gt_count);
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

struct FrameItem {
  std::size_t track;  // index into the trajectory span
  BoundingBox box;
};

using FrameTable = std::map<FrameIndex, std::vector<FrameItem>>;

FrameTable by_frame(std::span<const Trajectory> tracks) {
  FrameTable table;
  for (std::size_t i = 0; i < tracks.size(); ++i)
    for (const auto& d : tracks[i].entries) table[d.frame].push_back({i, d.box});
  return table;
}

std::size_t entry_count(std::span<const Trajectory> tracks) {
  std::size_t n = 0;
  for (const auto& t : tracks) n += t.entries.size();
  return n;
}

}  // namespace

double IdCounts::idf1() const { return ratio(2 * idtp, 2 * idtp + idfp + idfn); }
double IdCounts::idp() const { return ratio(idtp, idtp + idfp); }
double IdCounts::idr() const { return ratio(idtp, idtp + idfn); }

ClearCounts clear_mot(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
                      double iou_threshold) {
  ClearCounts counts;
  const FrameTable gt_frames = by_frame(gt);
  const FrameTable pred_frames = by_frame(pred);
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> previous(gt.size(), kNone);    // match in the previous frame
  std::vector<std::size_t> last_match(gt.size(), kNone);  // most recent match ever
  static const std::vector<FrameItem> kEmpty;

  std::vector<FrameIndex> frames;
  for (const auto& [f, _] : gt_frames) frames.push_back(f);
  for (const auto& [f, _] : pred_frames) frames.push_back(f);
  std::sort(frames.begin(), frames.end());
  frames.erase(std::unique(frames.begin(), frames.end()), frames.end());

  for (const FrameIndex f : frames) {
    const auto git = gt_frames.find(f);
    const auto pit = pred_frames.find(f);
    const auto& g = git == gt_frames.end() ? kEmpty : git->second;
    const auto& p = pit == pred_frames.end() ? kEmpty : pit->second;
    counts.gt_count += g.size();

    std::vector<int> g_match(g.size(), -1);
    std::vector<bool> p_used(p.size(), false);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::size_t prev = previous[g[i].track];
      if (prev == kNone) continue;
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j].track == prev && !p_used[j] && iou(g[i].box, p[j].box) >= iou_threshold) {
          g_match[i] = static_cast<int>(j);
          p_used[j] = true;
          break;
        }
      }
    }

    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g_match[i] < 0) rows.push_back(i);
    for (std::size_t j = 0; j < p.size(); ++j)
      if (!p_used[j]) cols.push_back(j);
    if (!rows.empty() && !cols.empty()) {
      std::vector<double> w(rows.size() * cols.size(), -1.0);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) {
          const double v = iou(g[rows[r]].box, p[cols[c]].box);
          if (v >= iou_threshold) w[r * cols.size() + c] = v;
        }
      const auto assigned = max_weight_assignment(rows.size(), cols.size(), w);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (assigned[r] < 0) continue;
        const std::size_t j = cols[static_cast<std::size_t>(assigned[r])];
        g_match[rows[r]] = static_cast<int>(j);
        p_used[j] = true;
      }
    }

    for (auto& v : previous) v = kNone;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g_match[i] < 0) {
        ++counts.false_negatives;
        continue;
      }
      const std::size_t gid = g[i].track;
      const std::size_t pid = p[static_cast<std::size_t>(g_match[i])].track;
      ++counts.matches;
      if (last_match[gid] != kNone && last_match[gid] != pid) ++counts.id_switches;
      last_match[gid] = pid;
      previous[gid] = pid;
    }
    counts.false_positives += static_cast<std::size_t>(std::count(p_used.begin(), p_used.end(), false));
  }
  return counts;
}

IdCounts id_metrics(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
                    double iou_threshold) {
  IdCounts counts;
  const std::size_t n_gt_entries = entry_count(gt);
  const std::size_t n_pred_entries = entry_count(pred);
  if (gt.empty() || pred.empty()) {
    counts.idfn = n_gt_entries;
    counts.idfp = n_pred_entries;
    return counts;
  }
  std::vector<double> overlap(gt.size() * pred.size(), 0.0);
  const FrameTable pred_frames = by_frame(pred);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    for (const auto& d : gt[i].entries) {
      const auto it = pred_frames.find(d.frame);
      if (it == pred_frames.end()) continue;
      for (const auto& item : it->second)
        if (iou(d.box, item.box) >= iou_threshold) overlap[i * pred.size() + item.track] += 1.0;
    }
  }
  const auto assigned = max_weight_assignment(gt.size(), pred.size(), overlap);
  for (std::size_t i = 0; i < gt.size(); ++i)
    if (assigned[i] >= 0)
      counts.idtp += static_cast<std::size_t>(overlap[i * pred.size() + static_cast<std::size_t>(assigned[i])]);
  counts.idfn = n_gt_entries - counts.idtp;
  counts.idfp = n_pred_entries - counts.idtp;
  return counts;
}

SequenceEval evaluate_sequence(const std::string& name, std::span<const Trajectory> gt,
                               std::span<const Trajectory> pred, double iou_threshold) {
  return {name, clear_mot(gt, pred, iou_threshold), id_metrics(gt, pred, iou_threshold)};
}

EvalReport summarize(std::vector<SequenceEval> sequences) {
  EvalReport report;
  for (const auto& s : sequences) {
    report.clear.gt_count += s.clear.gt_count;
    report.clear.matches += s.clear.matches;
    report.clear.false_positives += s.clear.false_positives;
    report.clear.false_negatives += s.clear.false_negatives;
    report.clear.id_switches += s.clear.id_switches;
    report.id.idtp += s.id.idtp;
    report.id.idfp += s.id.idfp;
    report.id.idfn += s.id.idfn;
  }
  report.per_sequence = std::move(sequences);
  return report;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct Row {
  std::string name;
  const ClearCounts* clear;
  const IdCounts* id;
};

std::vector<Row> report_rows(const EvalReport& report) {
  std::vector<Row> rows;
  for (const auto& s : report.per_sequence) rows.push_back({s.name, &s.clear, &s.id});
  rows.push_back({"COMBINED", &report.clear, &report.id});
  return rows;
}

}  // namespace

std::string format_report_text(const EvalReport& report) {
  const std::vector<std::string> header = {"Sequence", "MOTA", "IDF1", "IDP", "IDR",
                                           "FP",       "FN",   "IDSW", "GT"};
  std::vector<std::vector<std::string>> table = {header};
  for (const auto& r : report_rows(report)) {
    table.push_back({r.name, fixed(100.0 * r.clear->mota(), 2), fixed(100.0 * r.id->idf1(), 2),
                     fixed(100.0 * r.id->idp(), 2), fixed(100.0 * r.id->idr(), 2),
                     std::to_string(r.clear->false_positives),
                     std::to_string(r.clear->false_negatives),
                     std::to_string(r.clear->id_switches), std::to_string(r.clear->gt_count)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : table)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream out;
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << "  ";
      const std::string pad(width[c] - row[c].size(), ' ');
      out << (c == 0 ? row[c] + pad : pad + row[c]);
    }
    out << '\n';
  }
  return out.str();
}

std::string format_report_kv(const EvalReport& report) {
  std::ostringstream out;
  for (const auto& r : report_rows(report)) {
    out << "seq=" << r.name << " mota=" << fixed(r.clear->mota(), 6)
        << " idf1=" << fixed(r.id->idf1(), 6) << " idp=" << fixed(r.id->idp(), 6)
        << " idr=" << fixed(r.id->idr(), 6) << " fp=" << r.clear->false_positives
        << " fn=" << r.clear->false_negatives << " idsw=" << r.clear->id_switches
        << " gt=" << r.clear->gt_count << " idtp=" << r.id->idtp << " idfp=" << r.id->idfp
        << " idfn=" << r.id->idfn << '\n';
  }
  return out.str();
}

}  // namespace hit
