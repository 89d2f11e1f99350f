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

#include "fishsim/env.h"

namespace fishsim {
namespace {

// Mean unwrapped head yaw over the last flap period before t_end, degrees.
double NetYaw(const BiasedSinusoidParams& p, double t_end) {
  EnvConfig ec;
  ec.horizon = 1e9;
  SwimEnv env(SwimmerConfig{}, ec);
  BiasedSinusoidPolicy policy(p, ec, env.control_dt());
  policy.Reset();
  Observation obs = env.ResetWithTarget(Vec3(100, 0, 0));
  const double period = 1.0 / p.frequency;
  double prev = 0, unwrapped = 0, sum = 0;
  int n = 0;
  while (env.time() < t_end - 1e-9) {
    obs = env.Step(policy.Act(obs)).observation;
    const double y = Yaw(env.swimmer().state().bodies[0].orient);
    unwrapped += std::remainder(y - prev, 2 * kPi);
    prev = y;
    if (env.time() > t_end - period - 1e-9) {
      sum += unwrapped;
      ++n;
    }
  }
  return sum / n * 180 / kPi;
}

class ZeroPolicy : public Policy {
 public:
  double Act(const Observation&) override { return 0.0; }
};

TEST(EnvTest, ObservationLayout) {
  SwimEnv env(SwimmerConfig{});
  const Observation obs = env.ResetWithTarget(Vec3(2, 1, 0), 0.4);
  ASSERT_EQ(obs.size(), static_cast<size_t>(kObservationSize));
  EXPECT_EQ(EnvConfig{}.ObservationSize(), kObservationSize);
  EXPECT_NEAR(obs[0], std::cos(0.4), 1e-12);
  EXPECT_NEAR(obs[1], std::sin(0.4), 1e-12);
  // |d| and d.
  const Vec3 com = env.swimmer().CenterOfMass();
  EXPECT_NEAR(obs[14], std::hypot(2 - com.x(), 1 - com.y()), 1e-12);
  EXPECT_NEAR(obs[15], 2 - com.x(), 1e-12);
  EXPECT_NEAR(obs[16], 1 - com.y(), 1e-12);
  EXPECT_EQ(obs[21], 0.0);
}

TEST(EnvTest, RewardCases) {
  SwimEnv env(SwimmerConfig{});
  const Vec3 com0 = SwimEnv(SwimmerConfig{}).swimmer().CenterOfMass();
  env.ResetWithTarget(com0 + Vec3(2, 0, 0));
  StepResult r = env.Step(0.0);
  EXPECT_NEAR(r.reward, -2.0, 1e-3);
  EXPECT_DOUBLE_EQ(r.reward, -r.info.distance);

  env.ResetWithTarget(com0 + Vec3(2, 0, 0));
  r = env.Step(1.0);
  EXPECT_NEAR(r.reward, -3.0, 1e-3);
  EXPECT_DOUBLE_EQ(r.reward, -r.info.distance - 1.0);

  env.ResetWithTarget(com0);
  r = env.Step(0.0);
  EXPECT_TRUE(r.info.success);
  EXPECT_TRUE(r.done);
  EXPECT_NEAR(r.reward, 300.0, 1e-3);
}

TEST(EnvTest, ClampFlag) {
  SwimEnv env(SwimmerConfig{});
  env.ResetWithTarget(Vec3(2, 0, 0));
  EXPECT_FALSE(env.Step(0.5).info.clamped);
  const StepResult r = env.Step(3.0);
  EXPECT_TRUE(r.info.clamped);
  EXPECT_EQ(r.observation.back(), 1.0);
  EXPECT_TRUE(env.Step(std::nan("")).info.clamped);
}

TEST(EnvTest, ControlRate) {
  SwimEnv env(SwimmerConfig{});
  env.Reset(1);
  EXPECT_DOUBLE_EQ(env.control_dt(), 0.02);
  for (int i = 0; i < 10; ++i) env.Step(0.1);
  EXPECT_NEAR(env.time(), 0.2, 1e-12);
}

TEST(EnvTest, Deterministic) {
  auto run = [] {
    SwimEnv env(SwimmerConfig{});
    Observation obs = env.Reset(42);
    for (int i = 0; i < 50; ++i) {
      obs = env.Step(std::sin(0.3 * i)).observation;
    }
    return obs;
  };
  EXPECT_EQ(run(), run());
}

TEST(EnvTest, TargetsUniformInBox) {
  const EnvConfig ec;
  SwimEnv env(SwimmerConfig{});
  std::array<int, 16> counts{};
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    env.Reset(s);
    const Vec3& t = env.target();
    ASSERT_GE(t.x(), ec.box_x_min);
    ASSERT_LE(t.x(), ec.box_x_max);
    ASSERT_GE(t.y(), ec.box_y_min);
    ASSERT_LE(t.y(), ec.box_y_max);
    const int i = std::min(3, static_cast<int>(4 * (t.x() - ec.box_x_min) / (ec.box_x_max - ec.box_x_min)));
    const int j = std::min(3, static_cast<int>(4 * (t.y() - ec.box_y_min) / (ec.box_y_max - ec.box_y_min)));
    ++counts[4 * i + j];
  }
  double chi2 = 0;
  for (int c : counts) chi2 += std::pow(c - n / 16.0, 2) / (n / 16.0);
  // 15 degrees of freedom, p = 0.001.
  EXPECT_LT(chi2, 37.7);
}

// Moving swimmer and target together by a planar rigid motion leaves the
// head-frame observation unchanged.
TEST(EnvTest, RigidRelocationInvariance) {
  SwimEnv env(SwimmerConfig{});
  Observation obs = env.ResetWithTarget(Vec3(1.5, -0.7, 0));
  for (int i = 0; i < 40; ++i) obs = env.Step(std::sin(0.4 * i)).observation;

  const Quat r(Eigen::AngleAxisd(1.1, Vec3::UnitZ()));
  const Vec3 shift(3.0, -2.0, 0.0);
  Swimmer moved = env.swimmer();
  ArticulatedState& s = moved.mutable_state();
  s.bodies[0].pos = r * s.bodies[0].pos + shift;
  s.bodies[0].orient = r * s.bodies[0].orient;
  s.bodies[0].lin_vel = r * s.bodies[0].lin_vel;
  ForwardKinematics(moved.model(), &s);
  const Observation a = ObserveSwimmer(env.swimmer(), env.target(), obs.back(), 4);
  const Observation b = ObserveSwimmer(moved, r * env.target() + shift, obs.back(), 4);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9) << i;
}

TEST(EnvTest, SymmetricFlappingGoesStraight) {
  EXPECT_LT(std::abs(NetYaw({1.2, 2.0, 0.0, 0.0}, 10.0)), 2.0);
}

TEST(EnvTest, BiasSignTurnsPositiveYaw) {
  for (double b : {0.3, 0.8}) {
    EXPECT_GT(NetYaw({1.2, 2.0, b, 0.0}, 8.0), 0.0) << b;
    EXPECT_LT(NetYaw({1.2, 2.0, -b, 0.0}, 8.0), 0.0) << b;
  }
}

TEST(EnvTest, CircleDistanceMatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  const Vec3 c(0, 1, 0);
  for (int k = 0; k < 100; ++k) {
    const Vec3 p(u(rng), u(rng), u(rng));
    double best = 1e9;
    for (int i = 0; i < 20000; ++i) {
      const double a = 2 * kPi * i / 20000;
      best = std::min(best, std::hypot(p.x() - std::cos(a), p.y() - 1 - std::sin(a)));
    }
    EXPECT_NEAR(CircleDistance(p, c, 1.0), best, 1e-3);
  }
}

TEST(EnvTest, CircleWaypointsEndAtStart) {
  const auto w = CircleWaypoints(Vec3(0, 1, 0), 1.0, 16);
  ASSERT_EQ(w.size(), 16u);
  EXPECT_NEAR(w.back().norm(), 0.0, 1e-12);
  for (const Vec3& p : w) EXPECT_NEAR(CircleDistance(p, Vec3(0, 1, 0), 1.0), 0.0, 1e-12);
  // Counter-clockwise: the first waypoint lies to the right of the start.
  EXPECT_GT(w[0].x(), 0.0);
}

// A swimmer that never moves stays on the circle through its start point.
TEST(EnvTest, StationaryPolicyStaysOnCircle) {
  SwimEnv env(SwimmerConfig{});
  ZeroPolicy policy;
  const Vec3 c = env.swimmer().CenterOfMass() + Vec3(0, 1, 0);
  WaypointOptions o;
  o.duration = 5.0;
  const WaypointReport r = evaluate_waypoints(env, policy, CircleWaypoints(c, 1.0, 16), c, 1.0, o);
  EXPECT_LT(r.max_distance, 1e-6);
  EXPECT_EQ(r.reached, 0);
}

TEST(CemTest, ZeroGenerationsIsRandomSearch) {
  EnvConfig ec;
  ec.horizon = 1.0;
  CemOptions o;
  o.population = 3;
  o.elites = 1;
  o.generations = 0;
  o.eval_targets = {Vec3(1, 0, 0)};
  const CemResult r = cem_train(SwimmerConfig{}, ec, o);
  EXPECT_EQ(r.history.size(), 1u);
  EXPECT_EQ(r.episodes, 3);
  EXPECT_DOUBLE_EQ(r.best_return, r.history[0].best);
}

// Elites re-enter the next generation, so the elite mean cannot drop.
TEST(CemTest, EliteMeanNonDecreasing) {
  EnvConfig ec;
  ec.horizon = 2.0;
  CemOptions o;
  o.population = 4;
  o.elites = 2;
  o.generations = 3;
  o.seed = 9;
  o.eval_targets = {Vec3(0.5, 0.2, 0)};
  const CemResult r = cem_train(SwimmerConfig{}, ec, o);
  ASSERT_EQ(r.history.size(), 4u);
  for (size_t g = 1; g < r.history.size(); ++g) {
    EXPECT_GE(r.history[g].elite_mean, r.history[g - 1].elite_mean - 1e-12);
  }
  const CemBounds b;
  const auto x = r.best.AsArray();
  for (int k = 0; k < 4; ++k) {
    EXPECT_GE(x[k], b.lower[k]);
    EXPECT_LE(x[k], b.upper[k]);
  }
}

TEST(CemTest, BadOptionsThrow) {
  CemOptions o;
  o.elites = 20;
  EXPECT_THROW(cem_train(SwimmerConfig{}, EnvConfig{}, o), Error);
}

}  // namespace
}  // namespace fishsim
