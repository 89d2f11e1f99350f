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

#ifndef FISHSIM_CORE_H_
#define FISHSIM_CORE_H_

#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace fishsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
// Unit quaternion (w, x, y, z), rotating body coordinates into world
// coordinates.
using Quat = Eigen::Quaterniond;

inline constexpr double kPi = 3.14159265358979323846;

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Kinematic state of one rigid body.
//   pos      world frame, m
//   orient   body -> world
//   lin_vel  world frame, m/s
//   ang_vel  body frame, rad/s
struct BodyState {
  Vec3 pos = Vec3::Zero();
  Quat orient = Quat::Identity();
  Vec3 lin_vel = Vec3::Zero();
  Vec3 ang_vel = Vec3::Zero();

  Vec3 BodyLinearVelocity() const { return orient.conjugate() * lin_vel; }
  Vec3 WorldAngularVelocity() const { return orient * ang_vel; }
  bool IsFinite() const;
};

enum class Frame { kWorld, kBody };

// Force/torque pair. Torque is about the body's center of mass.
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
  Frame frame = Frame::kWorld;

  static Wrench Zero(Frame frame) { return Wrench{Vec3::Zero(), Vec3::Zero(), frame}; }

  // Throws if the frames differ.
  Wrench& operator+=(const Wrench& other);
  friend Wrench operator+(Wrench a, const Wrench& b) { return a += b; }

  // Re-expresses a body-frame wrench in the world frame (and vice versa).
  Wrench ToWorld(const Quat& orient) const;
  Wrench ToBody(const Quat& orient) const;
};

Vec3 rotate(const Quat& q, const Vec3& v);

// Advances an orientation by a body-frame angular velocity held constant
// over dt, using the exponential map. The result is re-normalized.
Quat integrate_orientation(const Quat& q, const Vec3& body_omega, double dt);

// exp of a rotation vector (axis * angle).
Quat QuatFromRotationVector(const Vec3& rv);
Vec3 RotationVectorFromQuat(const Quat& q);

// Heading (yaw) of a body's x-axis projected onto the world x-y plane.
double Yaw(const Quat& q);

inline Mat3 Skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

}  // namespace fishsim

#endif  // FISHSIM_CORE_H_
