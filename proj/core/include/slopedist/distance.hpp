#pragma once

#include <optional>
#include <span>
#include <vector>

#include "slopedist/ego_gradient.hpp"
#include "slopedist/target_adjust.hpp"
#include "slopedist/types.hpp"

namespace slopedist {

inline constexpr double kDefaultEpsilonPx = 1.0;

/// d = focal_px * h / (u - v). Throws DegenerateGeometry when u - v <= epsilon_px.
double pinhole_distance(double u, double v, const CameraCalibration& calib,
                        double epsilon_px = kDefaultEpsilonPx);

/// Same as pinhole_distance() but reports degeneracy as nullopt.
std::optional<double> try_pinhole_distance(double u, double v, const CameraCalibration& calib,
                                           double epsilon_px = kDefaultEpsilonPx) noexcept;

struct PipelineConfig {
  GradientEstimatorConfig gradient;
  AdjustmentPolicy policy = AdjustmentPolicy::defaults();
  double epsilon_px = kDefaultEpsilonPx;

  void validate() const;
};

/// Reads time_interval_s, alpha{1,2,3}_deg, t{1,2,3}_px, epsilon_px and
/// allow_downhill_alphas on top of the defaults. Unknown keys are rejected.
PipelineConfig pipeline_config_from(const KeyValueMap& kv, double theta_0);

/// Per-sequence state: calibration, pose history and the frame cursor.
/// Frames must arrive in strictly increasing order.
class Pipeline {
 public:
  Pipeline(const CameraCalibration& calib, const PipelineConfig& config);

  /// One estimate per detection, all sharing the frame's ego gradient.
  /// Every detection must carry pose.frame_index.
  std::vector<DistanceEstimate> process_frame(const PoseSample& pose,
                                              std::span<const Detection> detections);

  const CameraCalibration& calibration() const noexcept { return calib_; }
  const PipelineConfig& config() const noexcept { return config_; }

 private:
  DistanceEstimate estimate_one(const Detection& det, std::optional<double> theta) const;

  CameraCalibration calib_;
  PipelineConfig config_;
  PoseHistory history_;
};

struct SequenceResult {
  std::vector<DistanceEstimate> estimates;
  std::size_t frames = 0;
  /// Mean wall time of process_frame(), excluding parsing and output.
  double mean_frame_time_s = 0.0;
};

/// Runs a whole sequence. Detections may come in any order; a detection whose
/// frame has no pose is an InvariantViolation.
SequenceResult run_sequence(const CameraCalibration& calib, const PipelineConfig& config,
                            std::span<const PoseSample> poses,
                            std::span<const Detection> detections);

}  // namespace slopedist
