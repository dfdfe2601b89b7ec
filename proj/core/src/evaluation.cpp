#include "slopedist/evaluation.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "slopedist/errors.hpp"

namespace slopedist {

double rmse(std::span<const DistancePair> pairs) {
  if (pairs.empty()) throw EmptyInput("rmse of an empty pair list");
  double sum = 0.0;
  for (const auto& [est, truth] : pairs) {
    if (!std::isfinite(est) || !std::isfinite(truth) || !(est > 0.0) || !(truth > 0.0)) {
      throw InvariantViolation("rmse inputs are finite and positive");
    }
    const double e = est - truth;
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(pairs.size()));
}

JoinResult join_estimates(const std::vector<DistanceEstimate>& estimates,
                          const std::vector<TruthRecord>& truth, const EvalOptions& options) {
  if (truth.empty()) throw EmptyInput("truth stream is empty");

  std::map<std::uint64_t, std::vector<std::size_t>> by_frame;
  for (std::size_t i = 0; i < estimates.size(); ++i) by_frame[estimates[i].frame_index].push_back(i);
  std::vector<bool> used(estimates.size(), false);

  JoinResult result;
  result.truth_rows = truth.size();
  for (const auto& t : truth) {
    const auto it = by_frame.find(t.frame_index);
    if (it == by_frame.end()) continue;

    std::vector<std::size_t> candidates;
    for (auto i : it->second) {
      if (used[i]) continue;
      if (t.track_id && estimates[i].track_id != *t.track_id) continue;
      candidates.push_back(i);
    }
    if (candidates.empty()) continue;

    std::optional<std::size_t> chosen;
    if (t.track_id || candidates.size() == 1) {
      chosen = candidates.front();
    } else {
      double best = options.gate_m;
      for (auto i : candidates) {
        if (!estimates[i].distance_m) continue;
        const double gap = std::abs(*estimates[i].distance_m - t.true_distance_m);
        if (gap <= best) {
          best = gap;
          chosen = i;
        }
      }
    }
    ++result.matched_rows;
    if (!chosen) {
      ++result.excluded;
      continue;
    }
    used[*chosen] = true;
    const auto& e = estimates[*chosen];
    if (e.distance_m) {
      result.pairs.emplace_back(*e.distance_m, t.true_distance_m);
    } else {
      ++result.excluded;
    }
  }

  if (static_cast<double>(result.matched_rows) <
      options.min_join_fraction * static_cast<double>(result.truth_rows)) {
    throw JoinMismatch("only " + std::to_string(result.matched_rows) + " of " +
                       std::to_string(result.truth_rows) + " truth rows found an estimate");
  }
  return result;
}

EvalReport evaluate(const std::vector<DistanceEstimate>& estimates,
                    const std::vector<TruthRecord>& truth, const EvalOptions& options,
                    const PipelineInputs* inputs) {
  if ((options.ablation || options.timing) && inputs == nullptr) {
    throw InvariantViolation("ablation and timing need the pipeline inputs");
  }
  const auto joined = join_estimates(estimates, truth, options);
  if (joined.pairs.empty()) throw EmptyInput("no matched estimate carries a distance");

  EvalReport report;
  report.sequence = options.sequence;
  report.rmse_m = rmse(joined.pairs);
  report.frames = joined.truth_rows;
  report.matched_pairs = joined.pairs.size();
  report.excluded = joined.excluded;
  for (const auto& e : estimates) ++report.flag_histogram[std::string(to_string(e.flag))];

  if (options.timing) {
    const auto run = run_sequence(inputs->calib, inputs->config, inputs->poses, inputs->detections);
    report.mean_frame_time_s = run.mean_frame_time_s;
  }
  if (options.ablation) {
    PipelineConfig ablated = inputs->config;
    ablated.policy.enabled = false;
    const auto run = run_sequence(inputs->calib, ablated, inputs->poses, inputs->detections);
    const auto ablated_join = join_estimates(run.estimates, truth, options);
    if (ablated_join.pairs.empty()) throw EmptyInput("ablated run produced no distances");
    report.rmse_ablated_m = rmse(ablated_join.pairs);
    report.excluded_ablated = ablated_join.excluded;
  }
  return report;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

template <typename T>
nlohmann::ordered_json or_null(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string format_report_table(const EvalReport& r) {
  std::string out;
  out += pad("sequence", 24) + pad("RMSE_m", 12) + pad("RMSE_ablated_m", 16) + pad("frames", 9) +
         pad("excluded", 10) + "mean_frame_time_s\n";
  out += pad(r.sequence, 24) + pad(fixed(r.rmse_m, 4), 12) +
         pad(r.rmse_ablated_m ? fixed(*r.rmse_ablated_m, 4) : "-", 16) +
         pad(std::to_string(r.frames), 9) + pad(std::to_string(r.excluded), 10) +
         (r.mean_frame_time_s ? format_g6(*r.mean_frame_time_s) : "-") + "\n";
  out += "matched pairs: " + std::to_string(r.matched_pairs) + "\n";
  if (r.excluded_ablated) out += "excluded (ablated): " + std::to_string(*r.excluded_ablated) + "\n";
  out += "flags:";
  for (const auto& [flag, n] : r.flag_histogram) out += " " + flag + "=" + std::to_string(n);
  out += "\n";
  return out;
}

std::string format_report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["sequence"] = r.sequence;
  j["rmse_m"] = r.rmse_m;
  j["rmse_ablated_m"] = or_null(r.rmse_ablated_m);
  j["frames"] = r.frames;
  j["matched_pairs"] = r.matched_pairs;
  j["excluded"] = r.excluded;
  j["excluded_ablated"] = or_null(r.excluded_ablated);
  j["flag_histogram"] = r.flag_histogram;
  j["mean_frame_time_s"] = or_null(r.mean_frame_time_s);
  return j.dump(2) + "\n";
}

}  // namespace slopedist
