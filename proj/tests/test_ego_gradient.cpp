#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "slopedist/ego_gradient.hpp"
#include "slopedist/errors.hpp"
#include "slopedist/simulator.hpp"

using namespace slopedist;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix3d to_eigen(const oracle::Mat3& m) {
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m[i][j];
  return r;
}

void expect_vec(const Eigen::Vector3d& v, const oracle::Vec3& e, double tol) {
  EXPECT_NEAR(v.x(), e[0], tol);
  EXPECT_NEAR(v.y(), e[1], tol);
  EXPECT_NEAR(v.z(), e[2], tol);
}

PoseHistory history_of(std::initializer_list<std::pair<double, Eigen::Matrix3d>> samples,
                       double interval = 1.0) {
  PoseHistory h(interval);
  std::uint64_t frame = 0;
  for (const auto& [t, r] : samples) h.push({frame++, t, r});
  return h;
}

}  // namespace

TEST(InitialNormal, FlatMount) { expect_vec(initial_normal(0.0), {0, -1, 0}, 0.0); }

TEST(InitialNormal, PitchedMount) {
  // Frozen from an arbitrary-precision evaluation of (0, -cos 0.1, -sin 0.1).
  expect_vec(initial_normal(0.1), {0, -0.995004165278026, -0.0998334166468282}, 1e-12);
  EXPECT_NEAR(initial_normal(0.1).norm(), 1.0, 1e-12);
}

TEST(InitialNormal, BoundaryMountRejectedByConfig) {
  expect_vec(initial_normal(kPi / 2), {0, 0, -1}, 1e-12);
  GradientEstimatorConfig cfg;
  cfg.theta_0 = kPi / 2;
  EXPECT_THROW(cfg.validate(), InvariantViolation);
}

TEST(GroundNormal, MatchesIndependentProduct) {
  expect_vec(ground_normal(Eigen::Matrix3d::Identity(), 0.0), {0, -1, 0}, 0.0);

  const auto rx = oracle::rot_x(0.1);
  expect_vec(ground_normal(to_eigen(rx), 0.0), oracle::mul(rx, oracle::Vec3{0, -1, 0}), 1e-12);
  expect_vec(ground_normal(to_eigen(rx), 0.0), {0, -std::cos(0.1), -std::sin(0.1)}, 1e-12);

  // Yaw leaves the flat-mount normal fixed.
  expect_vec(ground_normal(to_eigen(oracle::rot_y(0.7)), 0.0), {0, -1, 0}, 1e-12);
}

TEST(EgoDirection, MatchesIndependentProduct) {
  expect_vec(ego_direction(Eigen::Matrix3d::Identity()), {0, 0, 1}, 0.0);
  const double phi = 0.3;
  expect_vec(ego_direction(to_eigen(oracle::rot_x(phi))), {0, -std::sin(phi), std::cos(phi)}, 1e-12);
  expect_vec(ego_direction(to_eigen(oracle::rot_y(kPi / 2))), {1, 0, 0}, 1e-12);
}

TEST(RoadGradient, Examples) {
  const Eigen::Vector3d n(0, -1, 0);
  EXPECT_NEAR(road_gradient(n, {0, 0, 1}), 0.0, 1e-15);
  EXPECT_NEAR(road_gradient(n, {0, -std::sin(0.05), std::cos(0.05)}), 0.05, 1e-12);
  EXPECT_NEAR(road_gradient(n, {0, -1, 0}), kPi / 2, 1e-12);
}

TEST(RoadGradient, RejectsNonUnitInput) {
  EXPECT_THROW(road_gradient({0, -1.001, 0}, {0, 0, 1}), NonUnitInput);
  EXPECT_THROW(road_gradient({0, -1, 0}, {0, 0, 0.5}), NonUnitInput);
}

TEST(RoadGradient, ClampsRoundOffAndStaysInRange) {
  // n . d is a hair above 1 after rounding; no NaN may escape.
  const Eigen::Vector3d n(0, -1, 0);
  const Eigen::Vector3d d = Eigen::Vector3d(0, -1.0 - 5e-7, 0);
  const double theta = road_gradient(n, d);
  EXPECT_FALSE(std::isnan(theta));
  EXPECT_LE(theta, kPi / 2);
}

TEST(EstimateTheta, IdenticalPosesGiveZero) {
  const auto h = history_of({{0.0, Eigen::Matrix3d::Identity()}, {1.0, Eigen::Matrix3d::Identity()}});
  EXPECT_EQ(estimate_theta(h, 1.0, {}), 0.0);
}

TEST(EstimateTheta, PitchAcrossIntervalIsPositiveUphill) {
  const auto h = history_of({{0.0, Eigen::Matrix3d::Identity()}, {1.0, pitch_rotation(0.05)}});
  const auto theta = estimate_theta(h, 1.0, {});
  ASSERT_TRUE(theta);
  EXPECT_NEAR(*theta, oracle::gradient(oracle::identity(), oracle::rot_x(0.05), 0.0), 1e-12);
  EXPECT_NEAR(*theta, 0.05, 1e-12);
}

TEST(EstimateTheta, ShortHistoryHasNoEstimate) {
  const auto h = history_of({{0.8, Eigen::Matrix3d::Identity()}, {1.0, pitch_rotation(0.05)}});
  EXPECT_FALSE(estimate_theta(h, 1.0, {}));
}

TEST(EstimateTheta, HalfIntervalIsEnough) {
  const auto h = history_of({{0.5, Eigen::Matrix3d::Identity()}, {1.0, pitch_rotation(0.05)}});
  EXPECT_TRUE(estimate_theta(h, 1.0, {}));
}

TEST(EstimateTheta, SelectsSampleNearestToBaseline) {
  // Jittered stream: the sample at 0.98 s is nearest to now - 1 = 1.0 s.
  PoseHistory h(1.0);
  h.push({0, 0.00, Eigen::Matrix3d::Identity()});
  h.push({1, 0.51, pitch_rotation(0.01)});
  h.push({2, 0.98, pitch_rotation(0.02)});
  h.push({3, 1.47, pitch_rotation(0.03)});
  h.push({4, 2.00, pitch_rotation(0.05)});
  EXPECT_DOUBLE_EQ(h.nearest(1.0).timestamp, 0.98);
  EXPECT_NEAR(*estimate_theta(h, 2.0, {}), 0.03, 1e-12);
}

TEST(PoseHistory, EvictsOnlyStaleSamples) {
  PoseHistory h(1.0);
  for (int k = 0; k < 300; ++k) h.push({static_cast<std::uint64_t>(k), k / 30.0, Eigen::Matrix3d::Identity()});
  EXPECT_LE(h.size(), 33u);
  EXPECT_LE(h.oldest().timestamp, h.newest().timestamp - 1.0 + 1e-12);
}

TEST(PoseHistory, RejectsOutOfOrder) {
  PoseHistory h(1.0);
  h.push({5, 1.0, Eigen::Matrix3d::Identity()});
  EXPECT_THROW(h.push({5, 1.5, Eigen::Matrix3d::Identity()}), OutOfOrderFrame);
  EXPECT_THROW(h.push({6, 1.0, Eigen::Matrix3d::Identity()}), OutOfOrderFrame);
}

TEST(EstimateThetaProperty, PurePitchRecoversAngle) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> phi_dist(-kPi / 4, kPi / 4);
  for (int i = 0; i < 200; ++i) {
    const double phi = phi_dist(rng);
    const auto h = history_of({{0.0, Eigen::Matrix3d::Identity()}, {1.0, pitch_rotation(phi)}});
    EXPECT_NEAR(*estimate_theta(h, 1.0, {}), phi, 1e-9) << phi;
  }
}

TEST(EstimateThetaProperty, CommonYawDoesNotChangeGradient) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pitch(-0.5, 0.5);
  std::uniform_real_distribution<double> yaw(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const auto prev = oracle::rot_x(pitch(rng));
    const auto curr = oracle::rot_x(pitch(rng));
    const auto y = oracle::rot_y(yaw(rng));
    const auto base = history_of({{0.0, to_eigen(prev)}, {1.0, to_eigen(curr)}});
    const auto yawed =
        history_of({{0.0, to_eigen(oracle::mul(y, prev))}, {1.0, to_eigen(oracle::mul(y, curr))}});
    EXPECT_NEAR(*estimate_theta(base, 1.0, {}), *estimate_theta(yawed, 1.0, {}), 1e-9);
  }
}

TEST(EstimateThetaProperty, OutputAlwaysInRange) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    oracle::Vec3 ax{g(rng), g(rng), g(rng)};
    const double n = std::sqrt(ax[0] * ax[0] + ax[1] * ax[1] + ax[2] * ax[2]);
    for (auto& x : ax) x /= n;
    const auto h = history_of({{0.0, Eigen::Matrix3d::Identity()},
                               {1.0, to_eigen(oracle::axis_angle(ax, a(rng)))}});
    const double theta = *estimate_theta(h, 1.0, {});
    EXPECT_FALSE(std::isnan(theta));
    EXPECT_GE(theta, -kPi / 2);
    EXPECT_LE(theta, kPi / 2);
  }
}
