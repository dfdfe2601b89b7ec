#include "slopedist/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "slopedist/errors.hpp"
#include "slopedist/keyvalue.hpp"
#include "slopedist/target_adjust.hpp"

namespace slopedist {

namespace {

std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

/// Splits text into non-blank lines and remembers line numbers.
class CsvReader {
 public:
  CsvReader(std::string_view text, std::string_view source) : text_(text), source_(source) {}

  bool next(std::vector<std::string_view>& fields) {
    while (!text_.empty()) {
      const auto eol = text_.find('\n');
      const auto line = trim(text_.substr(0, eol));
      text_ = eol == std::string_view::npos ? std::string_view{} : text_.substr(eol + 1);
      ++line_;
      if (line.empty()) continue;
      fields = split_fields(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(std::string(source_) + ":" + std::to_string(line_) + ": " + what);
  }

  void expect_header(std::string_view header) {
    std::vector<std::string_view> fields;
    if (!next(fields)) fail("missing header '" + std::string(header) + "'");
    if (join(fields) != header) fail("expected header '" + std::string(header) + "'");
  }

  static std::string join(const std::vector<std::string_view>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    return out;
  }

  double number(std::string_view field, std::string_view name) const {
    const auto v = to_number(field);
    if (!v) fail(std::string(name) + " is not a number: '" + std::string(field) + "'");
    return *v;
  }

  std::optional<double> optional_number(std::string_view field, std::string_view name) const {
    if (field.empty()) return std::nullopt;
    return number(field, name);
  }

  std::uint64_t index(std::string_view field, std::string_view name) const {
    const double v = number(field, name);
    if (v < 0.0 || v != std::floor(v) || v > 9.0e15) {
      fail(std::string(name) + " is not a non-negative integer: '" + std::string(field) + "'");
    }
    return static_cast<std::uint64_t>(v);
  }

  void expect_columns(const std::vector<std::string_view>& fields, std::size_t n) const {
    if (fields.size() != n) {
      fail("expected " + std::to_string(n) + " columns, got " + std::to_string(fields.size()));
    }
  }

 private:
  std::string_view text_;
  std::string_view source_;
  int line_ = 0;
};

void append_optional(std::string& out, const std::optional<double>& v) {
  if (v) out += format_g6(*v);
}

}  // namespace

std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<PoseSample> parse_poses_csv(std::string_view text, std::string_view source) {
  CsvReader reader(text, source);
  reader.expect_header(kPoseHeader);
  std::vector<PoseSample> poses;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    reader.expect_columns(f, 11);
    const auto frame = reader.index(f[0], "frame");
    const double t = reader.number(f[1], "timestamp");
    std::array<double, 9> r{};
    for (std::size_t i = 0; i < 9; ++i) r[i] = reader.number(f[2 + i], "rotation entry");
    if (!poses.empty() && (frame <= poses.back().frame_index || !(t > poses.back().timestamp))) {
      reader.fail("frames and timestamps must strictly increase");
    }
    poses.push_back(validate_pose(frame, t, r));
  }
  return poses;
}

std::string format_poses_csv(const std::vector<PoseSample>& poses) {
  std::string out(kPoseHeader);
  out += '\n';
  for (const auto& p : poses) {
    out += std::to_string(p.frame_index);
    out += ',';
    out += format_exact(p.timestamp);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        out += ',';
        out += format_exact(p.delta_r(i, j));
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<Detection> parse_detections_csv(std::string_view text, std::string_view source,
                                            const CameraCalibration& calib) {
  CsvReader reader(text, source);
  reader.expect_header(kDetectionHeader);
  std::vector<Detection> dets;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    reader.expect_columns(f, 6);
    const auto frame = reader.index(f[0], "frame");
    const auto track = reader.index(f[1], "track");
    const BoundingBox box{reader.number(f[2], "x_min"), reader.number(f[3], "y_min"),
                          reader.number(f[4], "x_max"), reader.number(f[5], "y_max")};
    try {
      dets.push_back(validate_detection(frame, track, box, calib));
    } catch (const InvariantViolation& e) {
      reader.fail(e.what());
    }
  }
  return dets;
}

std::string format_detections_csv(const std::vector<Detection>& detections) {
  std::string out(kDetectionHeader);
  out += '\n';
  for (const auto& d : detections) {
    out += std::to_string(d.frame_index) + ',' + std::to_string(d.track_id);
    for (double c : {d.bbox.x_min, d.bbox.y_min, d.bbox.x_max, d.bbox.y_max}) {
      out += ',';
      out += format_exact(c);
    }
    out += '\n';
  }
  return out;
}

std::string format_estimates_csv(const std::vector<DistanceEstimate>& estimates) {
  std::string out(kEstimateHeader);
  out += '\n';
  for (const auto& e : estimates) {
    out += std::to_string(e.frame_index) + ',' + std::to_string(e.track_id) + ',';
    append_optional(out, e.distance_m);
    out += ',';
    if (e.theta_ego) out += format_g6(rad_to_deg(*e.theta_ego));
    out += ',';
    if (e.theta_adjusted) out += format_g6(rad_to_deg(*e.theta_adjusted));
    out += ',';
    append_optional(out, e.v_line);
    out += ',';
    append_optional(out, e.delta_y_px);
    out += ',';
    out += to_string(e.flag);
    out += '\n';
  }
  return out;
}

std::vector<DistanceEstimate> parse_estimates_csv(std::string_view text, std::string_view source) {
  CsvReader reader(text, source);
  reader.expect_header(kEstimateHeader);
  std::vector<DistanceEstimate> out;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    reader.expect_columns(f, 8);
    DistanceEstimate e;
    e.frame_index = reader.index(f[0], "frame");
    e.track_id = reader.index(f[1], "track");
    e.distance_m = reader.optional_number(f[2], "distance_m");
    if (auto t = reader.optional_number(f[3], "theta_deg")) e.theta_ego = deg_to_rad(*t);
    if (auto t = reader.optional_number(f[4], "theta_adj_deg")) e.theta_adjusted = deg_to_rad(*t);
    e.v_line = reader.optional_number(f[5], "v_px");
    e.delta_y_px = reader.optional_number(f[6], "delta_y_px");
    const auto flag = parse_flag(f[7]);
    if (!flag) reader.fail("unknown flag '" + std::string(f[7]) + "'");
    e.flag = *flag;
    if (e.distance_m.has_value() != has_distance(e.flag)) {
      reader.fail("distance_m must be present exactly when the flag carries a distance");
    }
    if (e.distance_m && !(*e.distance_m > 0.0)) reader.fail("distance_m must be positive");
    out.push_back(e);
  }
  return out;
}

std::vector<TruthRecord> parse_truth_csv(std::string_view text, std::string_view source) {
  CsvReader reader(text, source);
  std::vector<std::string_view> f;
  if (!reader.next(f)) reader.fail("missing header");
  const std::string header = CsvReader::join(f);

  constexpr std::string_view base =
      "frame,true_distance_m,true_theta_ego_deg,true_theta_target_deg,same_plane";
  constexpr std::string_view base_tracked =
      "frame,track,true_distance_m,true_theta_ego_deg,true_theta_target_deg,same_plane";
  bool tracked = false;
  bool along = false;
  if (header == base) {
  } else if (header == std::string(base) + ",along_road_m") {
    along = true;
  } else if (header == base_tracked) {
    tracked = true;
  } else if (header == std::string(base_tracked) + ",along_road_m") {
    tracked = along = true;
  } else {
    reader.fail("unrecognized truth header '" + header + "'");
  }
  const std::size_t columns = 5 + (tracked ? 1 : 0) + (along ? 1 : 0);

  std::vector<TruthRecord> out;
  while (reader.next(f)) {
    reader.expect_columns(f, columns);
    std::size_t i = 0;
    TruthRecord r;
    r.frame_index = reader.index(f[i++], "frame");
    if (tracked) r.track_id = reader.index(f[i++], "track");
    r.true_distance_m = reader.number(f[i++], "true_distance_m");
    if (!(r.true_distance_m > 0.0)) reader.fail("true_distance_m must be positive");
    r.true_theta_ego = deg_to_rad(reader.number(f[i++], "true_theta_ego_deg"));
    r.true_theta_target = deg_to_rad(reader.number(f[i++], "true_theta_target_deg"));
    const auto same = f[i++];
    if (same == "1" || same == "true") r.same_plane = true;
    else if (same == "0" || same == "false") r.same_plane = false;
    else reader.fail("same_plane must be 0/1 or true/false");
    if (along) r.along_road_m = reader.number(f[i++], "along_road_m");
    out.push_back(r);
  }
  return out;
}

std::string format_truth_csv(const std::vector<TruthRecord>& truth) {
  const bool tracked = !truth.empty() && truth.front().track_id.has_value();
  std::string out = tracked ? std::string(
                                  "frame,track,true_distance_m,true_theta_ego_deg,"
                                  "true_theta_target_deg,same_plane,along_road_m")
                            : std::string(kTruthHeader);
  out += '\n';
  for (const auto& r : truth) {
    out += std::to_string(r.frame_index) + ',';
    if (tracked) out += std::to_string(r.track_id.value_or(0)) + ',';
    out += format_exact(r.true_distance_m) + ',';
    out += format_exact(rad_to_deg(r.true_theta_ego)) + ',';
    out += format_exact(rad_to_deg(r.true_theta_target)) + ',';
    out += r.same_plane ? "1" : "0";
    out += ',';
    out += format_exact(r.along_road_m.value_or(0.0));
    out += '\n';
  }
  return out;
}

std::string format_key_values(const KeyValueMap& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

}  // namespace slopedist
