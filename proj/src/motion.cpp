#include "hit/motion.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>

namespace hit {

namespace {

using Measurement = Eigen::Matrix<double, 4, 1>;
using MeasurementCovariance = Eigen::Matrix<double, 4, 4>;

Measurement to_measurement(const BoundingBox& box) { return {box.cx, box.cy, box.w, box.h}; }

double noise_height(const MotionState& s) { return std::max(s.mean(3), 1.0); }

int step_sign(Direction d) { return d == Direction::Forward ? 1 : -1; }

}  // namespace

BoundingBox MotionState::box() const {
  return {mean(0), mean(1), std::max(mean(2), 1.0), std::max(mean(3), 1.0)};
}

MotionState KalmanBoxFilter::initiate(const BoundingBox& box, FrameIndex frame,
                                      Direction direction) const {
  MotionState s;
  s.mean.head<4>() = to_measurement(box);
  s.mean.tail<4>().setZero();
  s.anchor_frame = frame;
  s.direction = direction;
  const double h = std::max(box.h, 1.0);
  const double pos = 2.0 * noise_.position * h;
  const double vel = 10.0 * noise_.velocity * h;
  StateVector var;
  var << pos * pos, pos * pos, pos * pos, pos * pos, vel * vel, vel * vel, vel * vel, vel * vel;
  s.covariance = var.asDiagonal();
  return s;
}

void KalmanBoxFilter::predict(MotionState& s) const {
  const double h = noise_height(s);
  const double pos = noise_.position * h;
  const double vel = noise_.velocity * h;

  s.mean.head<4>() += s.mean.tail<4>();

  // F P F^T with F = [I I; 0 I], expanded blockwise.
  const Eigen::Matrix4d p11 = s.covariance.topLeftCorner<4, 4>();
  const Eigen::Matrix4d p12 = s.covariance.topRightCorner<4, 4>();
  const Eigen::Matrix4d p21 = s.covariance.bottomLeftCorner<4, 4>();
  const Eigen::Matrix4d p22 = s.covariance.bottomRightCorner<4, 4>();
  s.covariance.topLeftCorner<4, 4>() = p11 + p12 + p21 + p22;
  s.covariance.topRightCorner<4, 4>() = p12 + p22;
  s.covariance.bottomLeftCorner<4, 4>() = p21 + p22;
  s.covariance.diagonal().head<4>().array() += pos * pos;
  s.covariance.diagonal().tail<4>().array() += vel * vel;

  s.anchor_frame += step_sign(s.direction);
}

void KalmanBoxFilter::update(MotionState& s, const BoundingBox& measurement) const {
  const double h = noise_height(s);
  const double r = noise_.position * h;
  MeasurementCovariance innovation_cov =
      s.covariance.topLeftCorner<4, 4>() + MeasurementCovariance::Identity() * (r * r);
  const Eigen::Matrix<double, 8, 4> pht = s.covariance.leftCols<4>();

  Eigen::LLT<MeasurementCovariance> llt(innovation_cov);
  // K = P H^T S^-1, computed as (S^-1 H P)^T since S is symmetric.
  const Eigen::Matrix<double, 8, 4> gain = llt.solve(pht.transpose()).transpose();

  const Measurement innovation = to_measurement(measurement) - s.mean.head<4>();
  s.mean += gain * innovation;

  // Joseph form keeps the covariance symmetric positive semi-definite.
  Eigen::Matrix<double, 8, 8> i_kh = Eigen::Matrix<double, 8, 8>::Identity();
  i_kh.leftCols<4>() -= gain;
  s.covariance = i_kh * s.covariance * i_kh.transpose() +
                 gain * (MeasurementCovariance::Identity() * (r * r)) * gain.transpose();
  s.covariance = 0.5 * (s.covariance + s.covariance.transpose()).eval();
}

std::vector<MotionState> filter_history(std::span<const Detection> entries, Direction direction,
                                        const MotionNoise& noise) {
  std::vector<MotionState> out(entries.size());
  if (entries.empty()) return out;
  const KalmanBoxFilter kf(noise);
  const int n = static_cast<int>(entries.size());
  const bool forward = direction == Direction::Forward;
  const int first = forward ? 0 : n - 1;
  const int step = forward ? 1 : -1;

  MotionState s = kf.initiate(entries[first].box, entries[first].frame, direction);
  out[first] = s;
  for (int i = first + step; i >= 0 && i < n; i += step) {
    const FrameIndex target = entries[i].frame;
    while (s.anchor_frame != target) kf.predict(s);
    kf.update(s, entries[i].box);
    out[i] = s;
  }
  return out;
}

MotionState fit(std::span<const Detection> entries, Direction direction, const MotionNoise& noise) {
  if (entries.empty()) throw Error("cannot fit motion to an empty tracklet");
  const KalmanBoxFilter kf(noise);
  const bool forward = direction == Direction::Forward;
  const std::size_t n = entries.size();
  auto at = [&](std::size_t k) -> const Detection& {
    return forward ? entries[k] : entries[n - 1 - k];
  };
  MotionState s = kf.initiate(at(0).box, at(0).frame, direction);
  for (std::size_t k = 1; k < n; ++k) {
    while (s.anchor_frame != at(k).frame) kf.predict(s);
    kf.update(s, at(k).box);
  }
  return s;
}

MotionState fit(const Tracklet& tracklet, Direction direction, const MotionNoise& noise) {
  return fit(std::span<const Detection>(tracklet.entries()), direction, noise);
}

BoundingBox predict(const MotionState& state, FrameIndex target_frame) {
  const int steps = (target_frame - state.anchor_frame) * step_sign(state.direction);
  if (steps < 0)
    throw Error("cannot predict frame " + std::to_string(target_frame) + " from a " +
                (state.direction == Direction::Forward ? "forward" : "backward") +
                " state anchored at " + std::to_string(state.anchor_frame));
  const StateVector m = state.mean;
  const double k = static_cast<double>(steps);
  return {m(0) + k * m(4), m(1) + k * m(5), std::max(m(2) + k * m(6), 1.0),
          std::max(m(3) + k * m(7), 1.0)};
}

int range_overlap(const Tracklet& a, const Tracklet& b) {
  return std::max(0, std::min(a.t_max(), b.t_max()) - std::max(a.t_min(), b.t_min()) + 1);
}

namespace {

void check_pair(const Tracklet& earlier, const Tracklet& later, int max_overlap) {
  if (earlier.empty() || later.empty()) throw Error("pair_similarity: empty tracklet");
  if (earlier.t_max() < later.t_min()) return;
  const bool ordered = earlier.t_min() < later.t_min() && earlier.t_max() < later.t_max();
  if (!ordered || range_overlap(earlier, later) > max_overlap)
    throw Error("pair_similarity: tracklets " + std::to_string(earlier.id()) + " and " +
                std::to_string(later.id()) + " are neither disjoint nor within the overlap allowance");
}

double overlap_similarity(const Tracklet& earlier, const Tracklet& later,
                          const OverlapKernel& kernel) {
  double sum = 0.0;
  int count = 0;
  for (const auto& d : later.entries()) {
    if (d.frame > earlier.t_max()) break;
    if (const Detection* other = earlier.at_frame(d.frame)) {
      sum += kernel(other->box, d.box);
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / count;
}

}  // namespace

double pair_similarity(const Tracklet& earlier, const Tracklet& later,
                       const MotionState& earlier_forward, const MotionState& later_backward,
                       const OverlapKernel& kernel, int max_overlap) {
  check_pair(earlier, later, max_overlap);
  if (earlier.t_max() >= later.t_min()) return overlap_similarity(earlier, later, kernel);
  const double fwd = kernel(predict(earlier_forward, later.t_min()), later.front().box);
  const double bwd = kernel(predict(later_backward, earlier.t_max()), earlier.back().box);
  return 0.5 * (fwd + bwd);
}

double pair_similarity(const Tracklet& earlier, const Tracklet& later, const OverlapKernel& kernel,
                       const MotionNoise& noise, int max_overlap) {
  check_pair(earlier, later, max_overlap);
  if (earlier.t_max() >= later.t_min()) return overlap_similarity(earlier, later, kernel);
  return pair_similarity(earlier, later, fit(earlier, Direction::Forward, noise),
                         fit(later, Direction::Backward, noise), kernel, max_overlap);
}

}  // namespace hit
