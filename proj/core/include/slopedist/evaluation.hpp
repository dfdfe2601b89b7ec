#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slopedist/distance.hpp"
#include "slopedist/io.hpp"

namespace slopedist {

/// (estimate, truth) in meters.
using DistancePair = std::pair<double, double>;

/// sqrt(mean((estimate - truth)^2)). Throws EmptyInput on an empty list and
/// InvariantViolation for non-finite or non-positive values.
double rmse(std::span<const DistancePair> pairs);

struct EvalOptions {
  std::string sequence = "sequence";
  bool ablation = false;
  /// Re-run the pipeline to measure mean per-frame time. Off by default so
  /// that reports stay byte-reproducible.
  bool timing = false;
  /// Nearest-distance gate for frames with several untracked candidates.
  double gate_m = 3.0;
  /// JoinMismatch below this fraction of truth rows finding an estimate.
  double min_join_fraction = 0.5;
};

/// Everything needed to re-run the pipeline for ablation or timing.
struct PipelineInputs {
  CameraCalibration calib;
  PipelineConfig config;
  std::vector<PoseSample> poses;
  std::vector<Detection> detections;
};

struct JoinResult {
  std::vector<DistancePair> pairs;
  std::size_t truth_rows = 0;
  std::size_t matched_rows = 0;
  /// Matched estimates that carry no distance (warm-up, degenerate).
  std::size_t excluded = 0;
};

/// Pairs estimates with truth by frame, and by track when truth has one.
/// Untracked truth with several candidates in a frame takes the nearest
/// distance within the gate. Throws JoinMismatch when too few rows match.
JoinResult join_estimates(const std::vector<DistanceEstimate>& estimates,
                          const std::vector<TruthRecord>& truth, const EvalOptions& options);

struct EvalReport {
  std::string sequence;
  double rmse_m = 0.0;
  std::optional<double> rmse_ablated_m;
  std::size_t frames = 0;
  std::size_t matched_pairs = 0;
  std::size_t excluded = 0;
  std::optional<std::size_t> excluded_ablated;
  std::map<std::string, std::size_t> flag_histogram;
  std::optional<double> mean_frame_time_s;
};

/// Scores `estimates` against `truth`. `inputs` is required when ablation or
/// timing is requested; the ablated run uses the same pipeline with
/// adjustment disabled.
EvalReport evaluate(const std::vector<DistanceEstimate>& estimates,
                    const std::vector<TruthRecord>& truth, const EvalOptions& options,
                    const PipelineInputs* inputs = nullptr);

/// Table with columns sequence, RMSE_m, RMSE_ablated_m, frames, excluded,
/// mean_frame_time_s, followed by pair count and flag histogram.
std::string format_report_table(const EvalReport& report);
std::string format_report_json(const EvalReport& report);

}  // namespace slopedist
