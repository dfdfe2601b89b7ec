#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "slopedist/io.hpp"
#include "slopedist/types.hpp"

namespace slopedist {

struct Knot {
  double station_m;    // horizontal position along the road
  double elevation_m;
};

/// Piecewise-linear road elevation. Stations must strictly increase.
class ElevationProfile {
 public:
  explicit ElevationProfile(std::vector<Knot> knots);

  const std::vector<Knot>& knots() const noexcept { return knots_; }
  double start() const noexcept { return knots_.front().station_m; }
  double end() const noexcept { return knots_.back().station_m; }

  /// Road length along the polyline between two stations (a <= b).
  double arc_length(double a, double b) const;

 private:
  std::vector<Knot> knots_;
};

struct ElevationSample {
  double elevation_m;
  double gradient_rad;  // atan of the active segment's slope
};

/// Linear interpolation at station s. On a knot, the segment that starts
/// there is active (the last knot uses the final segment). Throws OutOfRange
/// outside the knot span.
ElevationSample elevation(const ElevationProfile& profile, double s);

struct Scenario {
  ElevationProfile profile{{{0.0, 0.0}, {1000.0, 0.0}}};
  double ego_start_m = 0.0;
  double ego_speed = 16.67;  // m/s
  double frame_rate = 30.0;  // Hz
  double duration = 10.0;    // s
  double target_lead = 15.0; // m, horizontal gap at t = 0
  double target_speed = 16.67;
  CameraCalibration calib = CameraCalibration::from_focal_px(1000.0, 1.5, 184.0, 0.0, 1024, 368);
  double pixel_noise_sigma = 0.0;
  double target_height = 1.5;
  double target_width = 1.8;
  std::uint64_t seed = 0;
  std::uint64_t track_id = 1;

  /// Throws InvalidScenario.
  void validate() const;
  std::size_t frame_count() const;
};

/// Scenario keys plus calibration keys; `knot = station, elevation` repeats.
Scenario parse_scenario(std::string_view text, std::string_view source);
std::string format_scenario(const Scenario& scenario);

struct SimulationOutput {
  std::vector<PoseSample> poses;
  std::vector<Detection> detections;
  std::vector<TruthRecord> truth;
  std::size_t visible_frames = 0;
  std::vector<std::string> warnings;
};

/// Camera orientation (columns: right, down, forward in a world frame with
/// y down and z horizontal-forward) for a camera pitched up by `pitch`.
Eigen::Matrix3d pitch_rotation(double pitch);

/// Renders every frame through an exact pinhole camera. The ego camera sits
/// h above the road along the surface normal and pitches with the road; the
/// target's rear face stands perpendicular to its own segment. Frames whose
/// box leaves the image produce no detection row. Throws InvalidScenario or
/// TargetBehindCamera.
SimulationOutput generate(const Scenario& scenario);

}  // namespace slopedist
