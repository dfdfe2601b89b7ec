#include "slopedist/target_adjust.hpp"

#include <cmath>
#include <numbers>

#include "slopedist/errors.hpp"

namespace slopedist {

double deg_to_rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

AdjustmentPolicy AdjustmentPolicy::defaults() {
  return AdjustmentPolicy{deg_to_rad(3.0), deg_to_rad(5.0), deg_to_rad(6.0)};
}

void AdjustmentPolicy::validate() const {
  if (!(0.0 < alpha_1 && alpha_1 < alpha_2 && alpha_2 < alpha_3)) {
    throw InvariantViolation("0 < alpha_1 < alpha_2 < alpha_3");
  }
  if (!(alpha_3 < std::numbers::pi / 2)) throw InvariantViolation("alpha_3 < pi/2");
  if (!(t3_px < t2_px && t2_px < t1_px)) throw InvariantViolation("t3 < t2 < t1");
}

double vanishing_line(double theta, const CameraCalibration& calib) {
  return calib.c_y() - std::tan(theta) * calib.focal_px();
}

std::pair<double, EstimateFlag> adjust_theta(double theta, double delta_y,
                                             const AdjustmentPolicy& policy) {
  if (!policy.enabled) return {theta, EstimateFlag::SamePlane};
  if (delta_y < policy.t3_px) return {theta + policy.alpha_3, EstimateFlag::AdjustedA3};
  if (delta_y <= policy.t2_px) return {theta + policy.alpha_2, EstimateFlag::AdjustedA2};
  if (delta_y <= policy.t1_px) return {theta + policy.alpha_1, EstimateFlag::AdjustedA1};
  return {theta, EstimateFlag::SamePlane};
}

}  // namespace slopedist
