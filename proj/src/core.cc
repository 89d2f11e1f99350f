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

#include "fishsim/core.h"

#include <cmath>

namespace fishsim {

bool BodyState::IsFinite() const {
  return pos.allFinite() && orient.coeffs().allFinite() && lin_vel.allFinite() &&
         ang_vel.allFinite();
}

Wrench& Wrench::operator+=(const Wrench& other) {
  if (frame != other.frame) {
    throw Error("cannot add wrenches expressed in different frames");
  }
  force += other.force;
  torque += other.torque;
  return *this;
}

Wrench Wrench::ToWorld(const Quat& orient) const {
  if (frame == Frame::kWorld) return *this;
  return Wrench{orient * force, orient * torque, Frame::kWorld};
}

Wrench Wrench::ToBody(const Quat& orient) const {
  if (frame == Frame::kBody) return *this;
  const Quat inv = orient.conjugate();
  return Wrench{inv * force, inv * torque, Frame::kBody};
}

Vec3 rotate(const Quat& q, const Vec3& v) {
  // v' = v + 2w (u x v) + 2 u x (u x v), u = vector part.
  const Vec3 u = q.vec();
  const Vec3 t = 2.0 * u.cross(v);
  return v + q.w() * t + u.cross(t);
}

Quat QuatFromRotationVector(const Vec3& rv) {
  const double angle = rv.norm();
  if (angle < 1e-12) {
    // Second-order series keeps the map smooth near zero.
    Quat q(1.0 - angle * angle / 8.0, 0.5 * rv.x(), 0.5 * rv.y(), 0.5 * rv.z());
    return q.normalized();
  }
  const double half = 0.5 * angle;
  const Vec3 axis = rv / angle;
  const double s = std::sin(half);
  return Quat(std::cos(half), s * axis.x(), s * axis.y(), s * axis.z());
}

Vec3 RotationVectorFromQuat(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const double s = q.vec().norm();
  if (s < 1e-12) return 2.0 * q.vec();
  const double angle = 2.0 * std::atan2(s, q.w());
  return q.vec() / s * angle;
}

Quat integrate_orientation(const Quat& q, const Vec3& body_omega, double dt) {
  if (body_omega.isZero(0.0)) return q;
  Quat out = q * QuatFromRotationVector(body_omega * dt);
  out.normalize();
  return out;
}

double Yaw(const Quat& q) {
  const Vec3 x = q * Vec3::UnitX();
  return std::atan2(x.y(), x.x());
}

}  // namespace fishsim
