#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "slopedist/distance.hpp"
#include "slopedist/errors.hpp"
#include "slopedist/evaluation.hpp"
#include "slopedist/io.hpp"
#include "slopedist/keyvalue.hpp"
#include "slopedist/scenarios.hpp"
#include "slopedist/simulator.hpp"

namespace slopedist::cli {

namespace fs = std::filesystem;

namespace {

// Filenames written by `simulate` and picked up by `evaluate`.
constexpr const char* kCalibFile = "calib.txt";
constexpr const char* kPosesFile = "poses.csv";
constexpr const char* kDetectionsFile = "detections.csv";
constexpr const char* kTruthFile = "truth.csv";
constexpr const char* kScenarioFile = "scenario.txt";

PipelineConfig load_config(const std::optional<std::string>& path, const CameraCalibration& calib) {
  if (!path) {
    PipelineConfig cfg;
    cfg.gradient.theta_0 = calib.theta_0();
    return cfg;
  }
  return pipeline_config_from(read_key_value_file(*path), calib.theta_0());
}

PipelineInputs load_inputs(const fs::path& calib_path, const fs::path& poses_path,
                           const fs::path& detections_path, const std::optional<std::string>& config) {
  const auto calib = validate_calibration(read_key_value_file(calib_path));
  PipelineInputs in{calib, load_config(config, calib), {}, {}};
  in.poses = parse_poses_csv(read_text_file(poses_path), poses_path.string());
  in.detections = parse_detections_csv(read_text_file(detections_path), detections_path.string(), calib);
  return in;
}

void write_simulation(const Scenario& scenario, const SimulationOutput& sim, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_text_file(dir / kScenarioFile, format_scenario(scenario));
  write_text_file(dir / kCalibFile, format_key_values(scenario.calib.to_key_values()));
  write_text_file(dir / kPosesFile, format_poses_csv(sim.poses));
  write_text_file(dir / kDetectionsFile, format_detections_csv(sim.detections));
  write_text_file(dir / kTruthFile, format_truth_csv(sim.truth));
}

struct EstimateArgs {
  std::string calib, poses, detections, out;
  std::optional<std::string> config;
  bool no_adjust = false;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& err) {
  auto in = load_inputs(a.calib, a.poses, a.detections, a.config);
  if (a.no_adjust) in.config.policy.enabled = false;
  const auto result = run_sequence(in.calib, in.config, in.poses, in.detections);
  write_text_file(a.out, format_estimates_csv(result.estimates));
  err << "estimate: " << result.frames << " frames, " << result.estimates.size()
      << " estimates, mean frame time " << format_g6(result.mean_frame_time_s) << " s\n";
  return kExitOk;
}

struct SimulateArgs {
  std::string scenario, out_dir;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& err) {
  const auto scenario = parse_scenario(read_text_file(a.scenario), a.scenario);
  const auto sim = generate(scenario);
  for (const auto& w : sim.warnings) err << "warning: " << w << "\n";
  write_simulation(scenario, sim, a.out_dir);
  err << "simulate: " << sim.poses.size() << " frames, " << sim.detections.size()
      << " detections -> " << a.out_dir << "\n";
  return kExitOk;
}

struct EvaluateArgs {
  std::string estimates, truth;
  std::optional<std::string> calib, poses, detections, config, sequence;
  bool ablation = false;
  bool json = false;
  bool timing = false;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto estimates = parse_estimates_csv(read_text_file(a.estimates), a.estimates);
  const auto truth = parse_truth_csv(read_text_file(a.truth), a.truth);

  EvalOptions opts;
  opts.ablation = a.ablation;
  opts.timing = a.timing;
  const fs::path truth_dir = fs::path(a.truth).parent_path();
  if (a.sequence) {
    opts.sequence = *a.sequence;
  } else if (!truth_dir.empty() && truth_dir.filename() != "." && truth_dir.filename() != "") {
    opts.sequence = truth_dir.filename().string();
  }

  std::optional<PipelineInputs> inputs;
  if (a.ablation || a.timing) {
    // Without explicit inputs, fall back to the `simulate` layout beside the truth file.
    const fs::path calib = a.calib ? fs::path(*a.calib) : truth_dir / kCalibFile;
    const fs::path poses = a.poses ? fs::path(*a.poses) : truth_dir / kPosesFile;
    const fs::path dets = a.detections ? fs::path(*a.detections) : truth_dir / kDetectionsFile;
    inputs = load_inputs(calib, poses, dets, a.config);
  }
  const auto report = evaluate(estimates, truth, opts, inputs ? &*inputs : nullptr);
  out << (a.json ? format_report_json(report) : format_report_table(report));
  return kExitOk;
}

int cmd_demo(const std::optional<std::string>& out_dir, std::ostream& out) {
  const auto scenario = slope_transition_scenario();
  const auto sim = generate(scenario);
  if (out_dir) write_simulation(scenario, sim, *out_dir);

  PipelineConfig config;
  config.gradient.theta_0 = scenario.calib.theta_0();
  const auto run = run_sequence(scenario.calib, config, sim.poses, sim.detections);
  if (out_dir) write_text_file(fs::path(*out_dir) / "estimates.csv", format_estimates_csv(run.estimates));

  const PipelineInputs inputs{scenario.calib, config, sim.poses, sim.detections};
  EvalOptions opts;
  opts.sequence = "slope_transition";
  opts.ablation = true;
  opts.timing = true;
  const auto report = evaluate(run.estimates, sim.truth, opts, &inputs);

  out << "Slope-transition demo: ego on flat road, target climbs a +6 deg grade.\n";
  out << sim.poses.size() << " frames, " << sim.detections.size() << " detections\n\n";
  out << format_report_table(report);
  if (report.rmse_ablated_m && *report.rmse_ablated_m > 0.0) {
    out << "RMSE reduction from target-gradient adjustment: "
        << format_g6(100.0 * (1.0 - report.rmse_m / *report.rmse_ablated_m)) << " %\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monocular inter-vehicle distance estimation with road-gradient compensation",
               "slopedist"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate distances for a pose/detection sequence");
  estimate->add_option("--calib", est.calib, "Calibration key-value file")->required();
  estimate->add_option("--poses", est.poses, "Pose CSV")->required();
  estimate->add_option("--detections", est.detections, "Detection CSV")->required();
  estimate->add_option("--out", est.out, "Output estimate CSV")->required();
  estimate->add_option("--config", est.config, "Pipeline config key-value file");
  estimate->add_flag("--no-adjust", est.no_adjust, "Disable target-gradient adjustment");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic driving scenario");
  simulate->add_option("--scenario", sim.scenario, "Scenario key-value file")->required();
  simulate->add_option("--out-dir", sim.out_dir, "Output directory")->required();

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score estimates against ground truth");
  evaluate_cmd->add_option("--estimates", ev.estimates, "Estimate CSV")->required();
  evaluate_cmd->add_option("--truth", ev.truth, "Ground-truth CSV")->required();
  evaluate_cmd->add_flag("--ablation", ev.ablation, "Also score a run with adjustment disabled");
  evaluate_cmd->add_flag("--json", ev.json, "Print the report as JSON");
  evaluate_cmd->add_flag("--timing", ev.timing, "Re-run the pipeline and report mean frame time");
  evaluate_cmd->add_option("--calib", ev.calib, "Calibration (default: beside --truth)");
  evaluate_cmd->add_option("--poses", ev.poses, "Pose CSV (default: beside --truth)");
  evaluate_cmd->add_option("--detections", ev.detections, "Detection CSV (default: beside --truth)");
  evaluate_cmd->add_option("--config", ev.config, "Pipeline config key-value file");
  evaluate_cmd->add_option("--sequence", ev.sequence, "Sequence name for the report");

  std::optional<std::string> demo_dir;
  auto* demo = app.add_subcommand("demo", "Run the bundled slope-transition scenario");
  demo->add_option("--out-dir", demo_dir, "Keep the generated files here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (estimate->parsed()) return cmd_estimate(est, err);
    if (simulate->parsed()) return cmd_simulate(sim, err);
    if (evaluate_cmd->parsed()) return cmd_evaluate(ev, out);
    if (demo->parsed()) return cmd_demo(demo_dir, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace slopedist::cli
