#include "slopedist/distance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "slopedist/errors.hpp"
#include "slopedist/keyvalue.hpp"

namespace slopedist {

std::optional<double> try_pinhole_distance(double u, double v, const CameraCalibration& calib,
                                           double epsilon_px) noexcept {
  const double gap = u - v;
  if (!(gap > epsilon_px)) return std::nullopt;
  return calib.focal_px() * calib.height() / gap;
}

double pinhole_distance(double u, double v, const CameraCalibration& calib, double epsilon_px) {
  const auto d = try_pinhole_distance(u, v, calib, epsilon_px);
  if (!d) {
    throw DegenerateGeometry("target bottom (u=" + std::to_string(u) +
                             ") is not below the vanishing line (v=" + std::to_string(v) + ")");
  }
  return *d;
}

void PipelineConfig::validate() const {
  gradient.validate();
  policy.validate();
  if (!(epsilon_px >= 0.0) || !std::isfinite(epsilon_px)) throw InvariantViolation("epsilon_px >= 0");
}

PipelineConfig pipeline_config_from(const KeyValueMap& kv, double theta_0) {
  PipelineConfig cfg;
  cfg.gradient.theta_0 = theta_0;
  for (const auto& [key, text] : kv) {
    if (key == "allow_downhill_alphas") {
      if (text == "true" || text == "1") {
        cfg.policy.allow_downhill_alphas = true;
      } else if (text == "false" || text == "0") {
        cfg.policy.allow_downhill_alphas = false;
      } else {
        throw InvariantViolation("allow_downhill_alphas is true or false");
      }
      continue;
    }
    const auto value = to_number(text);
    if (!value) throw InvariantViolation(key + " is numeric");
    if (key == "time_interval_s") cfg.gradient.time_interval = *value;
    else if (key == "alpha1_deg") cfg.policy.alpha_1 = deg_to_rad(*value);
    else if (key == "alpha2_deg") cfg.policy.alpha_2 = deg_to_rad(*value);
    else if (key == "alpha3_deg") cfg.policy.alpha_3 = deg_to_rad(*value);
    else if (key == "t1_px") cfg.policy.t1_px = *value;
    else if (key == "t2_px") cfg.policy.t2_px = *value;
    else if (key == "t3_px") cfg.policy.t3_px = *value;
    else if (key == "epsilon_px") cfg.epsilon_px = *value;
    else throw InvariantViolation("unknown config key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

Pipeline::Pipeline(const CameraCalibration& calib, const PipelineConfig& config)
    : calib_(calib), config_(config), history_(config.gradient.time_interval) {
  config_.validate();
}

std::vector<DistanceEstimate> Pipeline::process_frame(const PoseSample& pose,
                                                      std::span<const Detection> detections) {
  for (const auto& det : detections) {
    if (det.frame_index != pose.frame_index) {
      throw InvariantViolation("detection frame " + std::to_string(det.frame_index) +
                               " does not match pose frame " + std::to_string(pose.frame_index));
    }
  }
  history_.push(pose);
  const auto theta = estimate_theta(history_, pose.timestamp, config_.gradient);

  std::vector<DistanceEstimate> out;
  out.reserve(detections.size());
  for (const auto& det : detections) out.push_back(estimate_one(det, theta));
  return out;
}

DistanceEstimate Pipeline::estimate_one(const Detection& det, std::optional<double> theta) const {
  DistanceEstimate est;
  est.frame_index = det.frame_index;
  est.track_id = det.track_id;
  if (!theta) {
    est.flag = EstimateFlag::NoPoseHistory;
    return est;
  }
  const double v = vanishing_line(*theta, calib_);
  const double dy = plane_difference(det.b_y(), v);
  const auto [theta_adj, flag] = adjust_theta(*theta, dy, config_.policy);
  const double v_adj = vanishing_line(theta_adj, calib_);

  est.theta_ego = *theta;
  est.theta_adjusted = theta_adj;
  est.v_line = v;
  est.delta_y_px = dy;
  est.distance_m = try_pinhole_distance(det.u(), v_adj, calib_, config_.epsilon_px);
  est.flag = est.distance_m ? flag : EstimateFlag::DegenerateGeometry;
  return est;
}

SequenceResult run_sequence(const CameraCalibration& calib, const PipelineConfig& config,
                            std::span<const PoseSample> poses,
                            std::span<const Detection> detections) {
  std::vector<Detection> sorted(detections.begin(), detections.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Detection& a, const Detection& b) { return a.frame_index < b.frame_index; });

  Pipeline pipeline(calib, config);
  SequenceResult result;
  result.estimates.reserve(sorted.size());

  using clock = std::chrono::steady_clock;
  clock::duration busy{};
  auto next = sorted.begin();
  for (const auto& pose : poses) {
    if (next != sorted.end() && next->frame_index < pose.frame_index) {
      throw InvariantViolation("detection for frame " + std::to_string(next->frame_index) +
                               " has no pose");
    }
    auto last = next;
    while (last != sorted.end() && last->frame_index == pose.frame_index) ++last;

    const auto start = clock::now();
    const auto offset = static_cast<std::size_t>(next - sorted.begin());
    const auto count = static_cast<std::size_t>(last - next);
    auto frame_estimates = pipeline.process_frame(pose, std::span(sorted).subspan(offset, count));
    busy += clock::now() - start;

    result.estimates.insert(result.estimates.end(), frame_estimates.begin(), frame_estimates.end());
    ++result.frames;
    next = last;
  }
  if (next != sorted.end()) {
    throw InvariantViolation("detection for frame " + std::to_string(next->frame_index) +
                             " has no pose");
  }
  if (result.frames > 0) {
    result.mean_frame_time_s =
        std::chrono::duration<double>(busy).count() / static_cast<double>(result.frames);
  }
  return result;
}

}  // namespace slopedist
