#include "slopedist/ego_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "slopedist/errors.hpp"

namespace slopedist {

void GradientEstimatorConfig::validate() const {
  if (!(time_interval > 0.0) || !std::isfinite(time_interval)) {
    throw InvariantViolation("time_interval > 0");
  }
  if (!(std::abs(theta_0) < std::numbers::pi / 2)) throw InvariantViolation("|theta_0| < pi/2");
}

Eigen::Vector3d initial_normal(double theta_0) {
  return {0.0, -std::cos(theta_0), -std::sin(theta_0)};
}

Eigen::Vector3d ground_normal(const Eigen::Matrix3d& delta_r_prev, double theta_0) {
  return delta_r_prev * initial_normal(theta_0);
}

Eigen::Vector3d ego_direction(const Eigen::Matrix3d& delta_r_curr) {
  return delta_r_curr.col(2);
}

double road_gradient(const Eigen::Vector3d& n, const Eigen::Vector3d& d_ego) {
  constexpr double kUnitTol = 1e-6;
  if (std::abs(n.norm() - 1.0) > kUnitTol) throw NonUnitInput("ground normal is not unit length");
  if (std::abs(d_ego.norm() - 1.0) > kUnitTol) {
    throw NonUnitInput("ego direction is not unit length");
  }
  const double c = std::clamp(n.dot(d_ego), -1.0, 1.0);
  return std::numbers::pi / 2 - std::acos(c);
}

PoseHistory::PoseHistory(double time_interval, std::size_t capacity)
    : time_interval_(time_interval), capacity_(std::max<std::size_t>(capacity, 2)) {
  if (!(time_interval > 0.0)) throw InvariantViolation("time_interval > 0");
}

void PoseHistory::push(const PoseSample& sample) {
  if (!samples_.empty()) {
    const auto& last = samples_.back();
    if (sample.frame_index <= last.frame_index || !(sample.timestamp > last.timestamp)) {
      throw OutOfOrderFrame("frame " + std::to_string(sample.frame_index) +
                            " does not follow frame " + std::to_string(last.frame_index));
    }
  }
  samples_.push_back(sample);

  const double target = sample.timestamp - time_interval_;
  while (samples_.size() >= 2 && samples_[1].timestamp <= target) samples_.pop_front();
  while (samples_.size() > capacity_) samples_.pop_front();
}

const PoseSample& PoseHistory::nearest(double t) const {
  if (samples_.empty()) throw EmptyInput("pose history is empty");
  const PoseSample* best = &samples_.front();
  double best_gap = std::abs(best->timestamp - t);
  for (const auto& s : samples_) {
    const double gap = std::abs(s.timestamp - t);
    if (gap < best_gap) {
      best = &s;
      best_gap = gap;
    }
  }
  return *best;
}

std::optional<double> estimate_theta(const PoseHistory& history, double now,
                                     const GradientEstimatorConfig& cfg) {
  if (history.empty()) return std::nullopt;
  if (history.oldest().timestamp > now - 0.5 * cfg.time_interval) return std::nullopt;

  const PoseSample& curr = history.newest();
  const PoseSample& prev = history.nearest(now - cfg.time_interval);
  return road_gradient(ground_normal(prev.delta_r, cfg.theta_0), ego_direction(curr.delta_r));
}

}  // namespace slopedist
