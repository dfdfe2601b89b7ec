#pragma once

#include <cstdint>

#include "slopedist/simulator.hpp"

namespace slopedist {

/// 1920x1080 camera, 3500 px focal length, mounted 1.2 m above the road.
CameraCalibration long_range_calibration();

/// Constant-grade road; the target closes from 60 m to 5 m of along-road gap
/// over 20 s at 30 fps.
Scenario closing_scenario(double grade_deg, double pixel_noise_sigma = 0.0,
                          std::uint64_t seed = 0);

/// Ego stays on flat road while the target drives onto a +6 degree grade.
Scenario slope_transition_scenario();

}  // namespace slopedist
