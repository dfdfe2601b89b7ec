#pragma once

#include <cstddef>
#include <deque>
#include <optional>

#include <Eigen/Core>

#include "slopedist/types.hpp"

namespace slopedist {

struct GradientEstimatorConfig {
  /// Baseline between the "previous" and "current" pose samples, seconds.
  double time_interval = 1.0;
  double theta_0 = 0.0;

  void validate() const;
};

/// Ground-plane normal in camera coordinates for a camera pitched by theta_0:
/// (0, -cos theta_0, -sin theta_0).
Eigen::Vector3d initial_normal(double theta_0);

/// Ground normal at the previous time point, delta_r_prev * initial_normal.
Eigen::Vector3d ground_normal(const Eigen::Matrix3d& delta_r_prev, double theta_0);

/// Forward axis of the camera at the current time point, delta_r_curr * (0,0,1).
Eigen::Vector3d ego_direction(const Eigen::Matrix3d& delta_r_curr);

/// pi/2 - acos(n . d). Positive when the camera has pitched up relative to
/// the previous ground plane. Throws NonUnitInput if either norm is off by
/// more than 1e-6.
double road_gradient(const Eigen::Vector3d& n, const Eigen::Vector3d& d_ego);

/// Chronological pose buffer for one sequence.
///
/// Samples that can never again be the nearest match for (now - interval) are
/// evicted from the front, so steady-state size is about interval * fps.
/// `capacity` is a hard upper bound on top of that.
class PoseHistory {
 public:
  explicit PoseHistory(double time_interval = 1.0, std::size_t capacity = 4096);

  /// Throws OutOfOrderFrame unless timestamp and frame index both increase.
  void push(const PoseSample& sample);

  bool empty() const noexcept { return samples_.empty(); }
  std::size_t size() const noexcept { return samples_.size(); }
  const PoseSample& oldest() const { return samples_.front(); }
  const PoseSample& newest() const { return samples_.back(); }

  /// Sample whose timestamp is closest to `t`; ties go to the older sample.
  const PoseSample& nearest(double t) const;

 private:
  double time_interval_;
  std::size_t capacity_;
  std::deque<PoseSample> samples_;
};

/// Gradient from the newest sample and the one nearest (now - interval).
/// Returns nullopt (no usable history) when the oldest sample is newer than
/// now - interval / 2.
std::optional<double> estimate_theta(const PoseHistory& history, double now,
                                     const GradientEstimatorConfig& cfg);

}  // namespace slopedist
