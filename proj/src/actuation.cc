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

#include "fishsim/actuation.h"

#include <algorithm>
#include <cmath>

namespace fishsim {

MotorState motor_step(const MotorState& motor, const MotorCommand& command, double dt) {
  MotorState next = motor;
  double rate = motor.rate;
  if (command.mode == MotorMode::kConstantRate) {
    rate = command.value;
    next.commanded_rate = command.value;
  } else {
    rate = motor.rate + command.value * dt;
    next.commanded_rate = rate;
  }
  next.rate = std::clamp(rate, -motor.max_rate, motor.max_rate);
  next.angle = motor.angle + next.rate * dt;
  return next;
}

double SliderOffset(const MotorState& motor) {
  const double c = motor.crank_arm;
  const double s = std::sin(motor.angle);
  if (motor.rod_length <= 0.0) return c * s;
  // Slider driven along the crank's sine direction through a rod of finite
  // length; zero offset at alpha = 0.
  const double l = motor.rod_length;
  const double cos_a = std::cos(motor.angle);
  return c * s + std::sqrt(l * l - c * c * cos_a * cos_a) - std::sqrt(l * l - c * c);
}

Vec3 ViaPointWorld(const ViaPoint& via, std::span<const BodyState> bodies) {
  const BodyState& b = bodies[via.body];
  return b.pos + b.orient * via.offset;
}

double tendon_length(const TendonRouting& routing, std::span<const BodyState> bodies) {
  double length = 0.0;
  for (size_t i = 0; i + 1 < routing.vias.size(); ++i) {
    length += (ViaPointWorld(routing.vias[i + 1], bodies) - ViaPointWorld(routing.vias[i], bodies)).norm();
  }
  return length;
}

double ModulatedRestLength(const TendonRouting& routing, const MotorState& motor) {
  const double s = SliderOffset(motor);
  return routing.side == TendonSide::kLeft ? routing.rest_length - s : routing.rest_length + s;
}

double TendonTension(const TendonRouting& routing, std::span<const BodyState> bodies,
                     const MotorState& motor) {
  const double stretch = tendon_length(routing, bodies) - ModulatedRestLength(routing, motor);
  return routing.stiffness * std::max(0.0, stretch);
}

std::vector<Wrench> tendon_forces(const TendonRouting& routing, std::span<const BodyState> bodies,
                                  const MotorState& motor) {
  std::vector<Wrench> out(bodies.size(), Wrench::Zero(Frame::kWorld));
  const double tension = TendonTension(routing, bodies, motor);
  if (tension <= 0.0) return out;
  auto apply = [&](const ViaPoint& via, const Vec3& at, const Vec3& force) {
    Wrench& w = out[via.body];
    w.force += force;
    w.torque += (at - bodies[via.body].pos).cross(force);
  };
  for (size_t i = 0; i + 1 < routing.vias.size(); ++i) {
    const Vec3 a = ViaPointWorld(routing.vias[i], bodies);
    const Vec3 b = ViaPointWorld(routing.vias[i + 1], bodies);
    const Vec3 d = b - a;
    const double len = d.norm();
    if (len <= 0.0) continue;
    const Vec3 f = tension * d / len;
    apply(routing.vias[i], a, f);
    apply(routing.vias[i + 1], b, -f);
  }
  return out;
}

}  // namespace fishsim
