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

#include <gtest/gtest.h>

#include "fishsim/core.h"

namespace fishsim {
namespace {

Quat RandomQuat(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Quat q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q;
}

Vec3 RandomVec(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

// Rotation matrix written out from the quaternion components.
Mat3 MatrixOracle(const Quat& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

TEST(RotateTest, Identity) {
  const Vec3 v = rotate(Quat::Identity(), Vec3(1, 2, 3));
  EXPECT_DOUBLE_EQ(v.x(), 1.0);
  EXPECT_DOUBLE_EQ(v.y(), 2.0);
  EXPECT_DOUBLE_EQ(v.z(), 3.0);
}

TEST(RotateTest, QuarterTurnAboutZ) {
  const Quat q(Eigen::AngleAxisd(kPi / 2, Vec3::UnitZ()));
  const Vec3 v = rotate(q, Vec3::UnitX());
  EXPECT_NEAR(v.x(), 0.0, 1e-15);
  EXPECT_NEAR(v.y(), 1.0, 1e-15);
  EXPECT_NEAR(v.z(), 0.0, 1e-15);
}

TEST(RotateTest, MatchesMatrixOracleAndPreservesMetric) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Quat q = RandomQuat(rng);
    const Vec3 a = RandomVec(rng, 5.0), b = RandomVec(rng, 5.0);
    const Vec3 ra = rotate(q, a), rb = rotate(q, b);
    EXPECT_LT((ra - MatrixOracle(q) * a).norm(), 1e-12);
    EXPECT_NEAR(ra.norm(), a.norm(), 1e-12);
    EXPECT_NEAR(ra.dot(rb), a.dot(b), 1e-12);
  }
}

TEST(IntegrateOrientationTest, ZeroRateKeepsOrientation) {
  std::mt19937_64 rng(2);
  const Quat q = RandomQuat(rng);
  const Quat r = integrate_orientation(q, Vec3::Zero(), 0.37);
  EXPECT_NEAR(q.angularDistance(r), 0.0, 1e-12);
}

TEST(IntegrateOrientationTest, HalfTurnRateForHalfSecond) {
  const Quat r = integrate_orientation(Quat::Identity(), Vec3(0, 0, kPi), 0.5);
  const Vec3 x = r * Vec3::UnitX();
  EXPECT_NEAR(std::atan2(x.y(), x.x()), kPi / 2, 1e-6);
  EXPECT_NEAR(r.norm(), 1.0, 1e-9);
}

TEST(IntegrateOrientationTest, StepsMatchClosedForm) {
  std::mt19937_64 rng(3);
  const Quat q0 = RandomQuat(rng);
  const Vec3 omega(0.3, -1.1, 2.0);
  Quat q = q0;
  for (int i = 0; i < 1000; ++i) q = integrate_orientation(q, omega, 1e-3);
  // Constant body rate: q(t) = q0 * exp(omega t / 2).
  const Quat exact = q0 * Quat(Eigen::AngleAxisd(omega.norm(), omega.normalized()));
  EXPECT_LT(q.angularDistance(exact), 1e-4);
}

TEST(IntegrateOrientationTest, ForwardThenBackwardIsIdentity) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const Quat q = RandomQuat(rng);
    const Vec3 w = RandomVec(rng, 3.0);
    const Quat r = integrate_orientation(integrate_orientation(q, w, 0.01), -w, 0.01);
    EXPECT_LT(q.angularDistance(r), 1e-9);
    EXPECT_NEAR(r.norm(), 1.0, 1e-9);
  }
}

TEST(RotationVectorTest, RoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const Vec3 rv = RandomVec(rng, 1.5);
    EXPECT_LT((RotationVectorFromQuat(QuatFromRotationVector(rv)) - rv).norm(), 1e-12);
  }
}

TEST(YawTest, HeadingOfRotatedBody) {
  for (double a : {-2.5, -0.3, 0.0, 1.0, 3.0}) {
    EXPECT_NEAR(Yaw(Quat(Eigen::AngleAxisd(a, Vec3::UnitZ()))), a, 1e-12);
  }
}

TEST(WrenchTest, AdditionRequiresSameFrame) {
  Wrench a = Wrench::Zero(Frame::kWorld);
  const Wrench b = Wrench::Zero(Frame::kBody);
  EXPECT_THROW(a += b, Error);
}

TEST(WrenchTest, FrameConversionRoundTrip) {
  std::mt19937_64 rng(6);
  const Quat q = RandomQuat(rng);
  const Wrench w{RandomVec(rng), RandomVec(rng), Frame::kBody};
  const Wrench world = w.ToWorld(q);
  EXPECT_EQ(world.frame, Frame::kWorld);
  EXPECT_LT((world.force - q * w.force).norm(), 1e-14);
  const Wrench back = world.ToBody(q);
  EXPECT_LT((back.force - w.force).norm(), 1e-14);
  EXPECT_LT((back.torque - w.torque).norm(), 1e-14);
}

TEST(BodyStateTest, FiniteCheck) {
  BodyState s;
  EXPECT_TRUE(s.IsFinite());
  s.lin_vel.x() = std::nan("");
  EXPECT_FALSE(s.IsFinite());
}

}  // namespace
}  // namespace fishsim
