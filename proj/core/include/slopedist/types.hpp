#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace slopedist {

using KeyValueMap = std::map<std::string, std::string, std::less<>>;

/// Pinhole intrinsics plus mounting height and pitch.
///
/// Pixel coordinates have their origin at the top-left pixel and y grows
/// downward. Only the ratio focal_px = f / delta_y enters the distance and
/// vanishing-line formulas, so a calibration may be built from either the
/// physical pair or focal_px directly.
class CameraCalibration {
 public:
  /// Physical focal length (m) and pixel pitch (m/px).
  static CameraCalibration from_physical(double f_m, double delta_y_m, double height_m, double c_y,
                                         double theta_0, int image_width, int image_height);
  static CameraCalibration from_focal_px(double focal_px, double height_m, double c_y,
                                         double theta_0, int image_width, int image_height);

  double focal_px() const noexcept { return focal_px_; }
  double height() const noexcept { return height_; }
  double c_y() const noexcept { return c_y_; }
  /// Horizontal principal point; taken as the image center.
  double c_x() const noexcept { return 0.5 * image_width_; }
  double theta_0() const noexcept { return theta_0_; }
  int image_width() const noexcept { return image_width_; }
  int image_height() const noexcept { return image_height_; }
  std::optional<double> f_m() const noexcept { return f_m_; }
  std::optional<double> delta_y_m() const noexcept { return delta_y_m_; }

  /// Serializes back to the flat key-value form read by validate_calibration().
  KeyValueMap to_key_values() const;

 private:
  CameraCalibration() = default;
  void check() const;

  double focal_px_ = 0.0;
  double height_ = 0.0;
  double c_y_ = 0.0;
  double theta_0_ = 0.0;
  int image_width_ = 0;
  int image_height_ = 0;
  std::optional<double> f_m_;
  std::optional<double> delta_y_m_;
};

/// Keys: f, delta_y (or focal_px), h, c_y, theta_0, image_width, image_height.
/// Throws MissingKey or InvariantViolation.
CameraCalibration validate_calibration(const KeyValueMap& raw);

/// Orientation of the camera at a frame expressed in the frame-0 camera
/// coordinates (x right, y down, z forward).
struct PoseSample {
  std::uint64_t frame_index = 0;
  double timestamp = 0.0;
  Eigen::Matrix3d delta_r = Eigen::Matrix3d::Identity();
};

/// Frobenius residual of R^T R - I.
double orthonormality_residual(const Eigen::Matrix3d& r);

/// Nearest rotation in the Frobenius sense (polar factor of r).
Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& r);

inline constexpr double kRotationAcceptTol = 1e-6;
inline constexpr double kRotationRepairTol = 1e-3;

/// Accepts rotations within 1e-6, repairs those within 1e-3, rejects the rest
/// with NotARotation. `entries` is row-major.
PoseSample validate_pose(std::uint64_t frame_index, double timestamp,
                         std::span<const double, 9> entries);
PoseSample validate_pose(std::uint64_t frame_index, double timestamp, const Eigen::Matrix3d& r);

struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
};

struct Detection {
  std::uint64_t frame_index = 0;
  std::uint64_t track_id = 0;
  BoundingBox bbox;

  /// Image row of the target's ground contact (box bottom).
  double u() const noexcept { return bbox.y_max; }
  /// Image row of the box center.
  double b_y() const noexcept { return 0.5 * (bbox.y_min + bbox.y_max); }
};

/// Checks ordering of the box corners and that the box intersects the image.
Detection validate_detection(std::uint64_t frame_index, std::uint64_t track_id,
                             const BoundingBox& bbox, const CameraCalibration& calib);

enum class EstimateFlag {
  Ok,
  SamePlane,
  AdjustedA1,
  AdjustedA2,
  AdjustedA3,
  DegenerateGeometry,
  NoPoseHistory,
};

std::string_view to_string(EstimateFlag flag) noexcept;
std::optional<EstimateFlag> parse_flag(std::string_view text) noexcept;

inline bool has_distance(EstimateFlag flag) noexcept {
  return flag != EstimateFlag::DegenerateGeometry && flag != EstimateFlag::NoPoseHistory;
}

struct DistanceEstimate {
  std::uint64_t frame_index = 0;
  std::uint64_t track_id = 0;
  std::optional<double> distance_m;
  // Intermediates are absent only for NoPoseHistory.
  std::optional<double> theta_ego;
  std::optional<double> theta_adjusted;
  std::optional<double> v_line;
  std::optional<double> delta_y_px;
  EstimateFlag flag = EstimateFlag::NoPoseHistory;
};

}  // namespace slopedist
