// Copyright 2026 The fishsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fishsim/actuation.h"
#include "fishsim/swimmer.h"

namespace fishsim {
namespace {

// Net force and net torque about the world origin.
std::pair<Vec3, Vec3> NetWrench(const std::vector<Wrench>& w, std::span<const BodyState> bodies) {
  Vec3 f = Vec3::Zero(), t = Vec3::Zero();
  for (size_t b = 0; b < w.size(); ++b) {
    f += w[b].force;
    t += w[b].torque + bodies[b].pos.cross(w[b].force);
  }
  return {f, t};
}

TEST(MotorStepTest, ConstantRateAdvancesAngle) {
  MotorState m;
  const double w = 2.0 * kPi * 1.19;
  for (int i = 0; i < 1000; ++i) m = motor_step(m, MotorCommand{MotorMode::kConstantRate, w}, 1e-3);
  EXPECT_NEAR(m.angle, w, 1e-9);
  EXPECT_DOUBLE_EQ(m.rate, w);
}

TEST(MotorStepTest, AccelerationMode) {
  MotorState m;
  m.rate = 1.0;
  EXPECT_DOUBLE_EQ(motor_step(m, MotorCommand{MotorMode::kAcceleration, 0.0}, 1e-3).rate, 1.0);
  EXPECT_NEAR(motor_step(m, MotorCommand{MotorMode::kAcceleration, 450.0 * 1.0}, 1e-3).rate, 1.45, 1e-12);
}

TEST(MotorStepTest, RateIsClampedToFiveHertz) {
  MotorState m;
  m.max_rate = 2.0 * kPi * 5.0;
  double peak = 0.0;
  for (int i = 0; i < 5000; ++i) {
    m = motor_step(m, MotorCommand{MotorMode::kAcceleration, 450.0}, 1e-3);
    peak = std::max(peak, std::abs(m.rate));
  }
  EXPECT_LE(peak, 2.0 * kPi * 5.0);
  EXPECT_DOUBLE_EQ(motor_step(m, MotorCommand{MotorMode::kConstantRate, -100.0}, 1e-3).rate, -m.max_rate);
}

TEST(SliderTest, FirstOrderAndRodModels) {
  MotorState m;
  m.crank_arm = 0.0395;
  for (double a : {-2.0, 0.0, 0.7, 3.0}) {
    m.angle = a;
    EXPECT_DOUBLE_EQ(SliderOffset(m), 0.0395 * std::sin(a));
  }
  m.rod_length = 1e4;  // very long rod approaches the first-order model
  m.angle = 0.9;
  EXPECT_NEAR(SliderOffset(m), 0.0395 * std::sin(0.9), 1e-7);
  m.angle = 0.0;
  EXPECT_NEAR(SliderOffset(m), 0.0, 1e-15);
}

TEST(TendonTest, TwoSegmentToyChain) {
  // Two bodies side by side: vias at known world points.
  std::vector<BodyState> bodies(2);
  bodies[1].pos = Vec3(-0.1, 0.0, 0.0);
  bodies[1].orient = Quat(Eigen::AngleAxisd(kPi / 2, Vec3::UnitZ()));
  TendonRouting r;
  r.vias = {{0, Vec3(0.0, 0.02, 0.0)}, {1, Vec3(0.03, 0.0, 0.0)}, {1, Vec3(-0.05, 0.01, 0.0)}};
  // World points: (0, 0.02), (-0.1, 0.03), (-0.11, -0.05).
  const double expected = std::hypot(0.1, 0.01) + std::hypot(0.01, 0.08);
  EXPECT_NEAR(tendon_length(r, bodies), expected, 1e-9);
  EXPECT_GE(tendon_length(r, bodies), (ViaPointWorld(r.vias[2], bodies) - ViaPointWorld(r.vias[0], bodies)).norm());
}

TEST(TendonTest, StraightTailIsSymmetric) {
  Swimmer fish(SwimmerConfig{});
  const auto& t = fish.tendons();
  const auto& bodies = fish.state().bodies;
  EXPECT_NEAR(tendon_length(t[0], bodies), tendon_length(t[1], bodies), 1e-12);
  EXPECT_NEAR(tendon_length(t[0], bodies), t[0].rest_length, 1e-12);
}

TEST(TendonTest, FrontBendShortensTheInnerTendon) {
  Swimmer fish(SwimmerConfig{});
  // A negative first hinge angle swings the tail toward +y (left).
  fish.SetJointAngles(std::vector<double>{-0.3});
  const auto& t = fish.tendons();
  const auto& bodies = fish.state().bodies;
  EXPECT_LT(tendon_length(t[0], bodies), tendon_length(t[1], bodies));
}

TEST(TendonTest, SlackTendonIsForceFree) {
  Swimmer fish(SwimmerConfig{});
  MotorState m = fish.motor();
  m.angle = -0.5;  // left rest length grows
  const auto w = tendon_forces(fish.tendons()[0], fish.state().bodies, m);
  for (const Wrench& x : w) {
    EXPECT_EQ(x.force, Vec3::Zero());
    EXPECT_EQ(x.torque, Vec3::Zero());
  }
}

TEST(TendonTest, MirroredForcesAtStraightPose) {
  Swimmer fish(SwimmerConfig{});
  const auto& bodies = fish.state().bodies;
  MotorState m = fish.motor();
  // Shorten both rest lengths equally so both tendons pull.
  TendonRouting left = fish.tendons()[0], right = fish.tendons()[1];
  left.rest_length -= 0.002;
  right.rest_length -= 0.002;
  const auto wl = tendon_forces(left, bodies, m);
  const auto wr = tendon_forces(right, bodies, m);
  for (size_t b = 0; b < bodies.size(); ++b) {
    EXPECT_NEAR(wl[b].force.x(), wr[b].force.x(), 1e-9);
    EXPECT_NEAR(wl[b].force.y(), -wr[b].force.y(), 1e-9);
    EXPECT_NEAR(wl[b].torque.z(), -wr[b].torque.z(), 1e-9);
  }
}

TEST(TendonTest, InternalForcesSumToZero) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  Swimmer fish(SwimmerConfig{});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> angles(6);
    for (double& a : angles) a = u(rng);
    fish.SetJointAngles(angles);
    MotorState m = fish.motor();
    m.angle = 3.0 * u(rng);
    for (const TendonRouting& r : fish.tendons()) {
      const auto [f, t] = NetWrench(tendon_forces(r, fish.state().bodies, m), fish.state().bodies);
      EXPECT_LT(f.norm(), 1e-9);
      EXPECT_LT(t.norm(), 1e-9);
    }
  }
}

TEST(TendonTest, RestLengthsAreAntagonistic) {
  Swimmer fish(SwimmerConfig{});
  MotorState m = fish.motor();
  for (double a : {-2.0, -0.4, 0.0, 1.1, 2.9}) {
    m.angle = a;
    const double l = ModulatedRestLength(fish.tendons()[0], m) - fish.tendons()[0].rest_length;
    const double r = ModulatedRestLength(fish.tendons()[1], m) - fish.tendons()[1].rest_length;
    EXPECT_DOUBLE_EQ(l, -r);
  }
}

TEST(TendonTest, PeakStretchIsAboutThreePercent) {
  for (double hz : {0.6, 1.19}) {
    Swimmer fish(SwimmerConfig{});
    double peak = 0.0;
    for (int i = 0; i < 5000; ++i) {
      fish.Step(MotorCommand{MotorMode::kConstantRate, 2.0 * kPi * hz});
      if (fish.time() > 1.0) peak = std::max({peak, fish.TendonStretch()[0], fish.TendonStretch()[1]});
    }
    EXPECT_GT(peak, 0.02) << hz;
    EXPECT_LT(peak, 0.04) << hz;
  }
}

}  // namespace
}  // namespace fishsim
