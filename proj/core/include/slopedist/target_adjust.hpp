#pragma once

#include <utility>

#include "slopedist/types.hpp"

namespace slopedist {

double deg_to_rad(double deg) noexcept;
double rad_to_deg(double rad) noexcept;

/// Step corrections added to the ego gradient when the target's box center
/// rises toward or above the vanishing line.
struct AdjustmentPolicy {
  double alpha_1;  // rad
  double alpha_2;
  double alpha_3;
  double t1_px = 0.0;
  double t2_px = -10.0;
  double t3_px = -20.0;
  /// Reserved hook for downhill targets. Off; nothing uses it yet.
  bool allow_downhill_alphas = false;
  /// When false every detection is treated as same-plane (ablation runs).
  bool enabled = true;

  /// 3, 5 and 6 degrees with thresholds 0, -10 and -20 px.
  static AdjustmentPolicy defaults();
  /// Throws InvariantViolation unless 0 < a1 < a2 < a3 and t3 < t2 < t1.
  void validate() const;
};

/// v = c_y - tan(theta) * focal_px. May fall outside the image.
double vanishing_line(double theta, const CameraCalibration& calib);

/// delta_y = b_y - v; positive when the box center is below the line.
inline double plane_difference(double b_y, double v) noexcept { return b_y - v; }

/// Steepest case first: delta_y < t3 -> +a3, <= t2 -> +a2, <= t1 -> +a1,
/// otherwise theta unchanged with SamePlane.
std::pair<double, EstimateFlag> adjust_theta(double theta, double delta_y,
                                             const AdjustmentPolicy& policy);

}  // namespace slopedist
