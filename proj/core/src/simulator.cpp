#include "slopedist/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "slopedist/errors.hpp"
#include "slopedist/keyvalue.hpp"

namespace slopedist {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t segment_index(const std::vector<Knot>& knots, double s) {
  // First knot strictly after s, clamped so the last knot maps to the final segment.
  const auto it = std::upper_bound(knots.begin(), knots.end(), s,
                                   [](double x, const Knot& k) { return x < k.station_m; });
  auto i = static_cast<std::size_t>(it - knots.begin());
  if (i == 0) i = 1;
  if (i >= knots.size()) i = knots.size() - 1;
  return i - 1;
}

/// World point on the road surface (x lateral, y down, z forward).
Eigen::Vector3d ground_point(const ElevationProfile& profile, double s) {
  return {0.0, -elevation(profile, s).elevation_m, s};
}

/// Upward surface normal for a road of gradient g.
Eigen::Vector3d up_normal(double g) { return {0.0, -std::cos(g), -std::sin(g)}; }

}  // namespace

ElevationProfile::ElevationProfile(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw InvalidScenario("profile needs at least two knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].station_m) || !std::isfinite(knots_[i].elevation_m)) {
      throw InvalidScenario("profile knots must be finite");
    }
    if (i > 0 && !(knots_[i].station_m > knots_[i - 1].station_m)) {
      throw InvalidScenario("profile stations must strictly increase");
    }
  }
}

double ElevationProfile::arc_length(double a, double b) const {
  if (b < a) return -arc_length(b, a);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const double lo = std::max(a, knots_[i].station_m);
    const double hi = std::min(b, knots_[i + 1].station_m);
    if (hi <= lo) continue;
    const double slope = (knots_[i + 1].elevation_m - knots_[i].elevation_m) /
                         (knots_[i + 1].station_m - knots_[i].station_m);
    total += (hi - lo) * std::sqrt(1.0 + slope * slope);
  }
  return total;
}

ElevationSample elevation(const ElevationProfile& profile, double s) {
  if (!(s >= profile.start() && s <= profile.end())) {
    throw OutOfRange("station " + num(s) + " outside profile [" + num(profile.start()) + ", " +
                     num(profile.end()) + "]");
  }
  const auto& k = profile.knots();
  const auto i = segment_index(k, s);
  const double run = k[i + 1].station_m - k[i].station_m;
  const double slope = (k[i + 1].elevation_m - k[i].elevation_m) / run;
  const double w = (s - k[i].station_m) / run;
  return {k[i].elevation_m * (1.0 - w) + k[i + 1].elevation_m * w, std::atan(slope)};
}

void Scenario::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(ego_speed) || ego_speed < 0.0) throw InvalidScenario("ego_speed >= 0");
  if (!finite(target_speed) || target_speed < 0.0) throw InvalidScenario("target_speed >= 0");
  if (!finite(frame_rate) || !(frame_rate > 0.0)) throw InvalidScenario("frame_rate > 0");
  if (!finite(duration) || duration < 0.0) throw InvalidScenario("duration >= 0");
  if (!finite(target_lead)) throw InvalidScenario("target_lead is finite");
  if (!finite(pixel_noise_sigma) || pixel_noise_sigma < 0.0) {
    throw InvalidScenario("pixel_noise_sigma >= 0");
  }
  if (!finite(target_height) || !(target_height > 0.0)) throw InvalidScenario("target_height > 0");
  if (!finite(target_width) || !(target_width > 0.0)) throw InvalidScenario("target_width > 0");
  if (frame_count() > 10'000'000) throw InvalidScenario("too many frames");

  const double t_end = static_cast<double>(frame_count() - 1) / frame_rate;
  const double ego_first = ego_start_m;
  const double ego_last = ego_start_m + ego_speed * t_end;
  const double tgt_first = ego_start_m + target_lead;
  const double tgt_last = tgt_first + target_speed * t_end;
  for (double s : {ego_first, ego_last, tgt_first, tgt_last}) {
    if (!(s >= profile.start() && s <= profile.end())) {
      throw InvalidScenario("vehicle leaves the profile (station " + num(s) + ")");
    }
  }
}

std::size_t Scenario::frame_count() const {
  const double n = std::round(duration * frame_rate);
  if (!(n >= 1.0)) return 1;
  if (n > 1e8) return static_cast<std::size_t>(1e8);
  return static_cast<std::size_t>(n);
}

Scenario parse_scenario(std::string_view text, std::string_view source) {
  const auto entries = parse_key_values(text, source);
  Scenario sc;
  std::vector<Knot> knots;
  KeyValueMap calib_kv;
  KeyValueMap seen;

  auto number = [&](const KeyValueEntry& e) {
    const auto v = to_number(e.value);
    if (!v) {
      throw InvalidScenario(std::string(source) + ":" + std::to_string(e.line) + ": " + e.key +
                            " is not a number");
    }
    return *v;
  };
  auto count = [&](const KeyValueEntry& e) {
    const double v = number(e);
    if (v < 0.0 || v != std::floor(v) || v > 9.0e15) {
      throw InvalidScenario(e.key + " is a non-negative integer");
    }
    return static_cast<std::uint64_t>(v);
  };

  for (const auto& e : entries) {
    if (e.key == "knot") {
      const auto comma = e.value.find(',');
      if (comma == std::string::npos) {
        throw InvalidScenario(std::string(source) + ":" + std::to_string(e.line) +
                              ": knot is 'station, elevation'");
      }
      const auto s = to_number(std::string_view(e.value).substr(0, comma));
      const auto z = to_number(std::string_view(e.value).substr(comma + 1));
      if (!s || !z) {
        throw InvalidScenario(std::string(source) + ":" + std::to_string(e.line) +
                              ": knot is 'station, elevation'");
      }
      knots.push_back({*s, *z});
      continue;
    }
    if (!seen.emplace(e.key, e.value).second) {
      throw InvalidScenario(std::string(source) + ":" + std::to_string(e.line) +
                            ": duplicate key '" + e.key + "'");
    }
    if (e.key == "ego_start") sc.ego_start_m = number(e);
    else if (e.key == "ego_speed") sc.ego_speed = number(e);
    else if (e.key == "frame_rate") sc.frame_rate = number(e);
    else if (e.key == "duration") sc.duration = number(e);
    else if (e.key == "target_lead") sc.target_lead = number(e);
    else if (e.key == "target_speed") sc.target_speed = number(e);
    else if (e.key == "pixel_noise_sigma") sc.pixel_noise_sigma = number(e);
    else if (e.key == "target_height") sc.target_height = number(e);
    else if (e.key == "target_width") sc.target_width = number(e);
    else if (e.key == "seed") sc.seed = count(e);
    else if (e.key == "track_id") sc.track_id = count(e);
    else if (e.key == "f" || e.key == "delta_y" || e.key == "focal_px" || e.key == "h" ||
             e.key == "c_y" || e.key == "theta_0" || e.key == "image_width" ||
             e.key == "image_height") {
      calib_kv.emplace(e.key, e.value);
    } else {
      throw InvalidScenario(std::string(source) + ":" + std::to_string(e.line) +
                            ": unknown scenario key '" + e.key + "'");
    }
  }
  if (!knots.empty()) sc.profile = ElevationProfile(std::move(knots));
  if (!calib_kv.empty()) sc.calib = validate_calibration(calib_kv);
  sc.validate();
  return sc;
}

std::string format_scenario(const Scenario& sc) {
  std::string out;
  for (const auto& [k, v] : sc.calib.to_key_values()) out += k + " = " + v + "\n";
  out += "ego_start = " + num(sc.ego_start_m) + "\n";
  out += "ego_speed = " + num(sc.ego_speed) + "\n";
  out += "frame_rate = " + num(sc.frame_rate) + "\n";
  out += "duration = " + num(sc.duration) + "\n";
  out += "target_lead = " + num(sc.target_lead) + "\n";
  out += "target_speed = " + num(sc.target_speed) + "\n";
  out += "pixel_noise_sigma = " + num(sc.pixel_noise_sigma) + "\n";
  out += "target_height = " + num(sc.target_height) + "\n";
  out += "target_width = " + num(sc.target_width) + "\n";
  out += "seed = " + std::to_string(sc.seed) + "\n";
  out += "track_id = " + std::to_string(sc.track_id) + "\n";
  for (const auto& k : sc.profile.knots()) {
    out += "knot = " + num(k.station_m) + ", " + num(k.elevation_m) + "\n";
  }
  return out;
}

Eigen::Matrix3d pitch_rotation(double pitch) {
  const double c = std::cos(pitch);
  const double s = std::sin(pitch);
  Eigen::Matrix3d r;
  r << 1.0, 0.0, 0.0,
       0.0, c, -s,
       0.0, s, c;
  return r;
}

SimulationOutput generate(const Scenario& sc) {
  sc.validate();
  const auto& calib = sc.calib;
  const std::size_t n = sc.frame_count();

  SimulationOutput out;
  out.poses.reserve(n);
  out.truth.reserve(n);

  std::mt19937_64 rng(sc.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  // Camera is mounted pitched down by theta_0 relative to the vehicle body.
  const double pitch_0 = elevation(sc.profile, sc.ego_start_m).gradient_rad - calib.theta_0();

  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / sc.frame_rate;
    const double s_ego = sc.ego_start_m + sc.ego_speed * t;
    const double s_tgt = sc.ego_start_m + sc.target_lead + sc.target_speed * t;
    const auto ego = elevation(sc.profile, s_ego);
    const auto tgt = elevation(sc.profile, s_tgt);

    const double pitch = ego.gradient_rad - calib.theta_0();
    const Eigen::Vector3d cam = ground_point(sc.profile, s_ego) + calib.height() * up_normal(ego.gradient_rad);
    const Eigen::Matrix3d world_from_cam = pitch_rotation(pitch);

    PoseSample pose;
    pose.frame_index = k;
    pose.timestamp = t;
    pose.delta_r = pitch_rotation(pitch - pitch_0);
    out.poses.push_back(pose);

    const Eigen::Vector3d bottom = ground_point(sc.profile, s_tgt);
    const Eigen::Vector3d up = sc.target_height * up_normal(tgt.gradient_rad);
    const Eigen::Vector3d side(0.5 * sc.target_width, 0.0, 0.0);
    const std::array<Eigen::Vector3d, 4> corners{bottom - side, bottom + side, bottom + up - side,
                                                 bottom + up + side};

    BoundingBox box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& p : corners) {
      const Eigen::Vector3d c = world_from_cam.transpose() * (p - cam);
      if (!(c.z() > 1e-6)) {
        throw TargetBehindCamera("frame " + std::to_string(k) + ": target is not in front of the camera");
      }
      const double x = calib.c_x() + calib.focal_px() * c.x() / c.z();
      const double y = calib.c_y() + calib.focal_px() * c.y() / c.z();
      box.x_min = std::min(box.x_min, x);
      box.x_max = std::max(box.x_max, x);
      box.y_min = std::min(box.y_min, y);
      box.y_max = std::max(box.y_max, y);
    }

    // Noise is drawn every frame so visibility never shifts the random stream.
    std::array<double, 4> e{};
    for (auto& v : e) v = noise(rng);
    if (sc.pixel_noise_sigma > 0.0) {
      box.x_min += sc.pixel_noise_sigma * e[0];
      box.y_min += sc.pixel_noise_sigma * e[1];
      box.x_max += sc.pixel_noise_sigma * e[2];
      box.y_max += sc.pixel_noise_sigma * e[3];
    }
    box = {std::floor(box.x_min), std::floor(box.y_min), std::floor(box.x_max), std::floor(box.y_max)};

    const bool visible = box.x_min >= 0.0 && box.y_min >= 0.0 &&
                         box.x_max <= calib.image_width() - 1 &&
                         box.y_max <= calib.image_height() - 1 && box.x_min < box.x_max &&
                         box.y_min < box.y_max;
    if (visible) {
      out.detections.push_back({k, sc.track_id, box});
      ++out.visible_frames;
    }

    TruthRecord truth;
    truth.frame_index = k;
    truth.true_distance_m = (bottom - cam).norm();
    truth.true_theta_ego = ego.gradient_rad;
    truth.true_theta_target = tgt.gradient_rad;
    const double on_ego_line =
        ego.elevation_m + std::tan(ego.gradient_rad) * (s_tgt - s_ego) - tgt.elevation_m;
    truth.same_plane = std::abs(ego.gradient_rad - tgt.gradient_rad) <= 1e-12 &&
                       std::abs(on_ego_line) <= 1e-9 * std::max(1.0, std::abs(s_tgt - s_ego));
    truth.along_road_m = sc.profile.arc_length(s_ego, s_tgt);
    out.truth.push_back(truth);
  }

  if (static_cast<double>(out.visible_frames) < 0.8 * static_cast<double>(n)) {
    out.warnings.push_back("target visible in only " + std::to_string(out.visible_frames) + " of " +
                           std::to_string(n) + " frames");
  }
  return out;
}

}  // namespace slopedist
