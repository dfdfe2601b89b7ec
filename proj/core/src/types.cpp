#include "slopedist/types.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "slopedist/errors.hpp"
#include "slopedist/keyvalue.hpp"

namespace slopedist {

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double require_number(const KeyValueMap& raw, std::string_view key) {
  const auto it = raw.find(key);
  if (it == raw.end()) throw MissingKey(std::string(key));
  const auto value = to_number(it->second);
  if (!value) throw InvariantViolation(std::string(key) + " is numeric");
  return *value;
}

int require_pixels(const KeyValueMap& raw, std::string_view key) {
  const double v = require_number(raw, key);
  if (v != std::floor(v) || v <= 0.0 || v > 1e6) {
    throw InvariantViolation(std::string(key) + " is a positive integer");
  }
  return static_cast<int>(v);
}

}  // namespace

CameraCalibration CameraCalibration::from_physical(double f_m, double delta_y_m, double height_m,
                                                   double c_y, double theta_0, int image_width,
                                                   int image_height) {
  if (!(f_m > 0.0)) throw InvariantViolation("f > 0");
  if (!(delta_y_m > 0.0)) throw InvariantViolation("delta_y > 0");
  CameraCalibration c = from_focal_px(f_m / delta_y_m, height_m, c_y, theta_0, image_width,
                                      image_height);
  c.f_m_ = f_m;
  c.delta_y_m_ = delta_y_m;
  return c;
}

CameraCalibration CameraCalibration::from_focal_px(double focal_px, double height_m, double c_y,
                                                   double theta_0, int image_width,
                                                   int image_height) {
  CameraCalibration c;
  c.focal_px_ = focal_px;
  c.height_ = height_m;
  c.c_y_ = c_y;
  c.theta_0_ = theta_0;
  c.image_width_ = image_width;
  c.image_height_ = image_height;
  c.check();
  return c;
}

void CameraCalibration::check() const {
  if (!(focal_px_ > 0.0) || !std::isfinite(focal_px_)) throw InvariantViolation("focal_px > 0");
  if (!(height_ > 0.0) || !std::isfinite(height_)) throw InvariantViolation("h > 0");
  if (image_width_ <= 0) throw InvariantViolation("image_width > 0");
  if (image_height_ <= 0) throw InvariantViolation("image_height > 0");
  if (!(c_y_ >= 0.0)) throw InvariantViolation("c_y >= 0");
  if (!(c_y_ < image_height_)) throw InvariantViolation("c_y < image_height");
  if (!(std::abs(theta_0_) < std::numbers::pi / 2)) throw InvariantViolation("|theta_0| < pi/2");
}

KeyValueMap CameraCalibration::to_key_values() const {
  KeyValueMap kv;
  if (f_m_ && delta_y_m_) {
    kv["f"] = format_number(*f_m_);
    kv["delta_y"] = format_number(*delta_y_m_);
  } else {
    kv["focal_px"] = format_number(focal_px_);
  }
  kv["h"] = format_number(height_);
  kv["c_y"] = format_number(c_y_);
  kv["theta_0"] = format_number(theta_0_);
  kv["image_width"] = std::to_string(image_width_);
  kv["image_height"] = std::to_string(image_height_);
  return kv;
}

CameraCalibration validate_calibration(const KeyValueMap& raw) {
  const bool has_focal_px = raw.contains("focal_px");
  const bool has_physical = raw.contains("f") || raw.contains("delta_y");
  if (has_focal_px && has_physical) {
    throw InvariantViolation("focal_px replaces f and delta_y; give one form only");
  }
  // Key order mirrors the file layout so the first missing key is reported.
  std::optional<double> f;
  std::optional<double> delta_y;
  std::optional<double> focal_px;
  if (has_focal_px) {
    focal_px = require_number(raw, "focal_px");
  } else {
    f = require_number(raw, "f");
    delta_y = require_number(raw, "delta_y");
  }
  const double h = require_number(raw, "h");
  const double c_y = require_number(raw, "c_y");
  const double theta_0 = require_number(raw, "theta_0");
  const int width = require_pixels(raw, "image_width");
  const int height = require_pixels(raw, "image_height");

  if (focal_px) return CameraCalibration::from_focal_px(*focal_px, h, c_y, theta_0, width, height);
  return CameraCalibration::from_physical(*f, *delta_y, h, c_y, theta_0, width, height);
}

double orthonormality_residual(const Eigen::Matrix3d& r) {
  return (r.transpose() * r - Eigen::Matrix3d::Identity()).norm();
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& r) {
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d& v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

PoseSample validate_pose(std::uint64_t frame_index, double timestamp, const Eigen::Matrix3d& r) {
  if (!std::isfinite(timestamp)) throw InvariantViolation("timestamp is finite");
  if (!r.allFinite()) throw NotARotation("frame " + std::to_string(frame_index) +
                                         ": non-finite rotation entry");
  const double residual = orthonormality_residual(r);
  const double det = r.determinant();
  if (residual > kRotationRepairTol || det <= 0.0) {
    throw NotARotation("frame " + std::to_string(frame_index) +
                       ": orthonormality residual " + format_number(residual) + ", det " +
                       format_number(det));
  }
  PoseSample pose{frame_index, timestamp, r};
  if (residual > kRotationAcceptTol || std::abs(det - 1.0) > kRotationAcceptTol) {
    pose.delta_r = nearest_rotation(r);
  }
  return pose;
}

PoseSample validate_pose(std::uint64_t frame_index, double timestamp,
                         std::span<const double, 9> entries) {
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = entries[static_cast<std::size_t>(3 * i + j)];
  return validate_pose(frame_index, timestamp, r);
}

Detection validate_detection(std::uint64_t frame_index, std::uint64_t track_id,
                             const BoundingBox& bbox, const CameraCalibration& calib) {
  const std::array coords{bbox.x_min, bbox.y_min, bbox.x_max, bbox.y_max};
  for (double c : coords) {
    if (!std::isfinite(c)) throw InvariantViolation("bounding box coordinates are finite");
  }
  if (!(bbox.x_min < bbox.x_max)) throw InvariantViolation("x_min < x_max");
  if (!(bbox.y_min < bbox.y_max)) throw InvariantViolation("y_min < y_max");
  const bool intersects = bbox.x_max > 0.0 && bbox.y_max > 0.0 &&
                          bbox.x_min < calib.image_width() && bbox.y_min < calib.image_height();
  if (!intersects) throw InvariantViolation("bounding box intersects the image");
  return {frame_index, track_id, bbox};
}

std::string_view to_string(EstimateFlag flag) noexcept {
  switch (flag) {
    case EstimateFlag::Ok: return "OK";
    case EstimateFlag::SamePlane: return "SAME_PLANE";
    case EstimateFlag::AdjustedA1: return "ADJUSTED_A1";
    case EstimateFlag::AdjustedA2: return "ADJUSTED_A2";
    case EstimateFlag::AdjustedA3: return "ADJUSTED_A3";
    case EstimateFlag::DegenerateGeometry: return "DEGENERATE_GEOMETRY";
    case EstimateFlag::NoPoseHistory: return "NO_POSE_HISTORY";
  }
  return "UNKNOWN";
}

std::optional<EstimateFlag> parse_flag(std::string_view text) noexcept {
  for (auto f : {EstimateFlag::Ok, EstimateFlag::SamePlane, EstimateFlag::AdjustedA1,
                 EstimateFlag::AdjustedA2, EstimateFlag::AdjustedA3,
                 EstimateFlag::DegenerateGeometry, EstimateFlag::NoPoseHistory}) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

}  // namespace slopedist
