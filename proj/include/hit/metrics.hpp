#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hit/refine.hpp"

namespace hit {

struct ClearCounts {
  std::size_t gt_count = 0;
  std::size_t matches = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::size_t id_switches = 0;

  /// 1 - (FP + FN + IDSW) / GT. With no ground truth: 1 if there are no false
  /// positives, else 0.
  double mota() const;
};

struct IdCounts {
  std::size_t idtp = 0;
  std::size_t idfp = 0;
  std::size_t idfn = 0;

  double idf1() const;
  double idp() const;
  double idr() const;
};

/// CLEAR-MOT counting. Correspondences from the previous frame that still
/// reach `iou_threshold` are kept; the remaining pairs are matched by maximum
/// total IoU. An identity switch is counted when a ground-truth track is
/// matched to a different prediction than at its last match.
ClearCounts clear_mot(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
                      double iou_threshold = 0.5);

/// Identity metrics from a global one-to-one assignment of ground-truth to
/// predicted identities maximizing the number of frames matched at
/// `iou_threshold`.
IdCounts id_metrics(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
                    double iou_threshold = 0.5);

struct SequenceEval {
  std::string name;
  ClearCounts clear;
  IdCounts id;
};

struct EvalReport {
  std::vector<SequenceEval> per_sequence;
  ClearCounts clear;  // summed over sequences
  IdCounts id;

  double mota() const { return clear.mota(); }
  double idf1() const { return id.idf1(); }
  double idp() const { return id.idp(); }
  double idr() const { return id.idr(); }
};

SequenceEval evaluate_sequence(const std::string& name, std::span<const Trajectory> gt,
                               std::span<const Trajectory> pred, double iou_threshold = 0.5);

/// Sums the per-sequence counts.
EvalReport summarize(std::vector<SequenceEval> sequences);

/// Aligned table, one row per sequence plus a combined row.
std::string format_report_text(const EvalReport& report);

/// `key=value` lines, one per sequence plus `seq=COMBINED`.
std::string format_report_kv(const EvalReport& report);

}  // namespace hit
