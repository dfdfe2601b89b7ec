#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slopedist/types.hpp"

namespace slopedist {

// CSV streams. Parsers take the text plus a source name used in error
// messages; they throw ParseError for malformed rows and the core_types
// validation errors for rows that parse but violate an invariant.

inline constexpr std::string_view kPoseHeader =
    "frame,timestamp,r00,r01,r02,r10,r11,r12,r20,r21,r22";
inline constexpr std::string_view kDetectionHeader = "frame,track,x_min,y_min,x_max,y_max";
inline constexpr std::string_view kEstimateHeader =
    "frame,track,distance_m,theta_deg,theta_adj_deg,v_px,delta_y_px,flag";
inline constexpr std::string_view kTruthHeader =
    "frame,true_distance_m,true_theta_ego_deg,true_theta_target_deg,same_plane,along_road_m";

/// Ground truth for one frame (and optionally one track).
struct TruthRecord {
  std::uint64_t frame_index = 0;
  std::optional<std::uint64_t> track_id;
  double true_distance_m = 0.0;
  double true_theta_ego = 0.0;     // rad
  double true_theta_target = 0.0;  // rad
  bool same_plane = true;
  std::optional<double> along_road_m;
};

/// Frames and timestamps must be strictly increasing.
std::vector<PoseSample> parse_poses_csv(std::string_view text, std::string_view source);
std::string format_poses_csv(const std::vector<PoseSample>& poses);

std::vector<Detection> parse_detections_csv(std::string_view text, std::string_view source,
                                            const CameraCalibration& calib);
std::string format_detections_csv(const std::vector<Detection>& detections);

/// Floats use 6 significant digits; absent values are empty fields.
std::string format_estimates_csv(const std::vector<DistanceEstimate>& estimates);
std::vector<DistanceEstimate> parse_estimates_csv(std::string_view text, std::string_view source);

/// Accepts the header with or without a `track` column after `frame`, and
/// with or without the trailing along_road_m column.
std::vector<TruthRecord> parse_truth_csv(std::string_view text, std::string_view source);
std::string format_truth_csv(const std::vector<TruthRecord>& truth);

std::string format_key_values(const KeyValueMap& kv);

/// printf-style "%.6g".
std::string format_g6(double v);

}  // namespace slopedist
