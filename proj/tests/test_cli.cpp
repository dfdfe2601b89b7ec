#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "slopedist/io.hpp"
#include "slopedist/keyvalue.hpp"
#include "slopedist/scenarios.hpp"
#include "slopedist/simulator.hpp"

namespace fs = std::filesystem;
using namespace slopedist;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("slopedist_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path simulate(const Scenario& s, const std::string& name) {
    const auto scenario_path = dir_ / (name + ".txt");
    write_text_file(scenario_path, format_scenario(s));
    const auto out_dir = dir_ / name;
    const auto r = run({"simulate", "--scenario", scenario_path.string(), "--out-dir", out_dir.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    return out_dir;
  }

  Result estimate(const fs::path& seq, const fs::path& out, bool no_adjust = false) {
    std::vector<std::string> args{"estimate",     "--calib", (seq / "calib.txt").string(),
                                  "--poses",      (seq / "poses.csv").string(),
                                  "--detections", (seq / "detections.csv").string(),
                                  "--out",        out.string()};
    if (no_adjust) args.push_back("--no-adjust");
    return run(args);
  }

  fs::path dir_;
};

}  // namespace

TEST(Cli, UnknownFlagIsUsageError) {
  const auto r = run({"estimate", "--calib", "c", "--poses", "p", "--detections", "d", "--out", "o", "--bogus"});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("--bogus"), std::string::npos) << r.err;
}

TEST(Cli, MissingSubcommandIsUsageError) { EXPECT_EQ(run({}).code, cli::kExitValidation); }

TEST(Cli, HelpExitsCleanly) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST_F(CliTest, MissingInputFileIsIoError) {
  const auto r = run({"evaluate", "--estimates", (dir_ / "none.csv").string(), "--truth",
                      (dir_ / "none2.csv").string()});
  EXPECT_EQ(r.code, cli::kExitIo);
}

TEST_F(CliTest, BadCalibrationIsValidationError) {
  const auto seq = simulate(slope_transition_scenario(), "seq");
  write_text_file(seq / "calib.txt", "focal_px = -3\nh = 1.2\nc_y = 540\ntheta_0 = 0\n"
                                     "image_width = 1920\nimage_height = 1080\n");
  const auto r = estimate(seq, dir_ / "est.csv");
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("focal_px > 0"), std::string::npos) << r.err;
}

TEST_F(CliTest, EstimateWritesOneRowPerDetection) {
  const auto seq = simulate(slope_transition_scenario(), "seq");
  const auto r = estimate(seq, dir_ / "est.csv");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto calib = validate_calibration(read_key_value_file(seq / "calib.txt"));
  const auto dets = parse_detections_csv(read_text_file(seq / "detections.csv"), "d", calib);
  const auto ests = parse_estimates_csv(read_text_file(dir_ / "est.csv"), "e");
  ASSERT_EQ(ests.size(), dets.size());
  for (std::size_t i = 0; i < ests.size(); ++i) EXPECT_EQ(ests[i].frame_index, dets[i].frame_index);
}

TEST_F(CliTest, EvaluateAblationShowsAdjustmentHelps) {
  const auto seq = simulate(slope_transition_scenario(), "slope");
  ASSERT_EQ(estimate(seq, seq / "est.csv").code, 0);
  const auto r = run({"evaluate", "--estimates", (seq / "est.csv").string(), "--truth",
                      (seq / "truth.csv").string(), "--ablation", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(r.out);
  EXPECT_LT(report["rmse_m"].get<double>(), report["rmse_ablated_m"].get<double>());
  EXPECT_EQ(report["sequence"], "slope");
}

TEST_F(CliTest, EstimateThenEvaluateIsReproducible) {
  const auto seq = simulate(closing_scenario(6.0, 1.0, 5), "grade");
  std::string reports[2];
  for (int k = 0; k < 2; ++k) {
    const auto est = dir_ / ("est" + std::to_string(k) + ".csv");
    ASSERT_EQ(estimate(seq, est).code, 0);
    const auto r = run({"evaluate", "--estimates", est.string(), "--truth", (seq / "truth.csv").string(),
                        "--ablation"});
    ASSERT_EQ(r.code, 0) << r.err;
    reports[k] = r.out;
  }
  EXPECT_EQ(reports[0], reports[1]);
  EXPECT_EQ(read_text_file(dir_ / "est0.csv"), read_text_file(dir_ / "est1.csv"));
}

TEST_F(CliTest, NoAdjustMarksEverythingSamePlane) {
  const auto seq = simulate(slope_transition_scenario(), "seq");
  ASSERT_EQ(estimate(seq, dir_ / "est.csv", true).code, 0);
  for (const auto& e : parse_estimates_csv(read_text_file(dir_ / "est.csv"), "e")) {
    EXPECT_TRUE(e.flag == EstimateFlag::SamePlane || e.flag == EstimateFlag::NoPoseHistory ||
                e.flag == EstimateFlag::DegenerateGeometry);
  }
}

TEST_F(CliTest, DemoPrintsReport) {
  const auto r = run({"demo", "--out-dir", (dir_ / "demo").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("RMSE_ablated_m"), std::string::npos);
  EXPECT_NE(r.out.find("RMSE reduction"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "demo" / "estimates.csv"));
}
