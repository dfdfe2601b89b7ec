#include "slopedist/scenarios.hpp"

#include <cmath>

#include "slopedist/target_adjust.hpp"

namespace slopedist {

CameraCalibration long_range_calibration() {
  return CameraCalibration::from_focal_px(3500.0, 1.2, 540.0, 0.0, 1920, 1080);
}

Scenario closing_scenario(double grade_deg, double pixel_noise_sigma, std::uint64_t seed) {
  const double g = deg_to_rad(grade_deg);
  // Stations are horizontal; scale so the gap measured along the road is 60 -> 5 m.
  const double c = std::cos(g);
  Scenario sc;
  sc.profile = ElevationProfile({{0.0, 0.0}, {1000.0, 1000.0 * std::tan(g)}});
  sc.calib = long_range_calibration();
  sc.frame_rate = 30.0;
  sc.duration = 20.0;
  sc.ego_speed = 20.0 * c;
  sc.target_lead = 60.0 * c;
  sc.target_speed = (20.0 - 55.0 / 20.0) * c;
  sc.pixel_noise_sigma = pixel_noise_sigma;
  sc.seed = seed;
  return sc;
}

Scenario slope_transition_scenario() {
  Scenario sc;
  const double rise = 200.0 * std::tan(deg_to_rad(6.0));
  sc.profile = ElevationProfile({{0.0, 0.0}, {30.0, 0.0}, {230.0, rise}});
  sc.calib = long_range_calibration();
  sc.frame_rate = 30.0;
  sc.duration = 4.0;
  sc.ego_speed = 5.0;
  sc.target_lead = 20.0;
  sc.target_speed = 5.0;
  return sc;
}

}  // namespace slopedist
