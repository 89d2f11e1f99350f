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

#ifndef FISHSIM_ACTUATION_H_
#define FISHSIM_ACTUATION_H_

#include <span>
#include <vector>

#include "fishsim/core.h"

namespace fishsim {

// Velocity-controlled motor driving a crank of arm length crank_arm. A
// rod_length of 0 selects the first-order (sinusoidal) crank-slider model.
struct MotorState {
  double angle = 0.0;           // alpha, rad
  double rate = 0.0;            // rad/s
  double commanded_rate = 0.0;  // rad/s
  double max_rate = 2.0 * kPi * 5.0;
  double crank_arm = 0.0395;    // m
  double rod_length = 0.0;      // m
};

enum class MotorMode {
  kConstantRate,  // command is a rate, rad/s
  kAcceleration,  // command is an angular acceleration, rad/s^2
};

struct MotorCommand {
  MotorMode mode = MotorMode::kConstantRate;
  double value = 0.0;
};

// Advances the motor by dt. The realized rate is clamped to +-max_rate.
MotorState motor_step(const MotorState& motor, const MotorCommand& command, double dt);

// Slider displacement relative to alpha = 0. Equals crank_arm * sin(alpha)
// for the first-order model.
double SliderOffset(const MotorState& motor);

enum class TendonSide { kLeft, kRight };

struct ViaPoint {
  int body = 0;
  Vec3 offset = Vec3::Zero();  // body frame, from the body COM
};

struct TendonRouting {
  TendonSide side = TendonSide::kLeft;
  std::vector<ViaPoint> vias;  // ordered head -> tail
  double rest_length = 0.0;    // m, at alpha = 0
  double stiffness = 0.0;      // N/m
};

Vec3 ViaPointWorld(const ViaPoint& via, std::span<const BodyState> bodies);

// Length of the polyline through the via points.
double tendon_length(const TendonRouting& routing, std::span<const BodyState> bodies);

// Rest length modulated by the crank: L0 - s(alpha) on the left,
// L0 + s(alpha) on the right.
double ModulatedRestLength(const TendonRouting& routing, const MotorState& motor);

// Pull-only spring tension, N.
double TendonTension(const TendonRouting& routing, std::span<const BodyState> bodies,
                     const MotorState& motor);

// World-frame wrench about each body's COM produced by the tendon's tension
// acting along its polyline. Internal: the wrenches sum to zero.
std::vector<Wrench> tendon_forces(const TendonRouting& routing, std::span<const BodyState> bodies,
                                  const MotorState& motor);

}  // namespace fishsim

#endif  // FISHSIM_ACTUATION_H_
