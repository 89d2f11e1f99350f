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

// The tendon-driven fish: head, spine segments and caudal fin as a hinge
// chain, with fluid forces, tendons and the surface constraint applied every
// step.

#ifndef FISHSIM_SWIMMER_H_
#define FISHSIM_SWIMMER_H_

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "fishsim/actuation.h"
#include "fishsim/config.h"
#include "fishsim/data.h"
#include "fishsim/dynamics.h"
#include "fishsim/hydro.h"

namespace fishsim {

enum class Medium { kWater, kAir };

struct SwimmerOptions {
  Medium medium = Medium::kWater;
  bool fixed_head = false;  // head clamped at the origin
  bool tendons = true;
};

struct MarkerSite {
  int body = 0;
  Vec3 offset = Vec3::Zero();  // body frame
};

class Swimmer {
 public:
  explicit Swimmer(const SwimmerConfig& config, SwimmerOptions options = {});

  // Rest pose at the origin heading +x; the motor starts at motor_angle.
  void Reset(double motor_angle = 0.0);
  void SetJointAngles(std::span<const double> angles);

  // Advances motor and body by one integration step.
  void Step(const MotorCommand& command);

  // World-frame wrenches applied on each body this step (fluid without the
  // acceleration-proportional added mass, tendons, surface constraint).
  std::vector<Wrench> AppliedWrenches() const;

  std::array<Vec3, kMarkerCount> MarkerPositions() const;
  Vec3 CenterOfMass() const;
  Vec3 CenterOfMassVelocity() const;
  double TotalMass() const;

  // Relative stretch (L - L_rest(alpha)) / L0 of each tendon.
  std::array<double, 2> TendonStretch() const;

  const SwimmerConfig& config() const { return config_; }
  const SwimmerOptions& options() const { return options_; }
  const ChainModel& model() const { return model_; }
  const std::vector<EllipsoidGeom>& geoms() const { return geoms_; }
  const std::array<TendonRouting, 2>& tendons() const { return tendons_; }
  const ArticulatedState& state() const { return state_; }
  ArticulatedState& mutable_state() { return state_; }
  const MotorState& motor() const { return motor_; }
  MotorState& mutable_motor() { return motor_; }
  double dt() const { return config_.dt; }
  double time() const { return state_.time; }
  int num_tail_joints() const { return static_cast<int>(model_.joints.size()); }

 private:
  SwimmerConfig config_;
  SwimmerOptions options_;
  ChainModel model_;
  std::vector<EllipsoidGeom> geoms_;
  std::vector<double> surface_stiffness_, surface_damping_;
  std::array<TendonRouting, 2> tendons_;
  std::array<MarkerSite, kMarkerCount> markers_;
  ArticulatedState state_;
  MotorState motor_;
};

// Maps the swimmer's current state to a motor command.
using Controller = std::function<MotorCommand(const Swimmer&)>;

// alpha(t) = rate * t + phase (the phase is applied at reset).
Controller ConstantRateController(double rate);

struct SimTrajectory {
  MarkerTrajectory markers;
  double sim_time = 0.0;   // s
  double wall_time = 0.0;  // s
  double realtime_factor() const { return wall_time > 0.0 ? sim_time / wall_time : 0.0; }
};

struct SimulateOptions {
  SwimmerOptions swimmer;
  double motor_phase = 0.0;           // initial motor angle, rad
  std::vector<double> initial_joints; // optional initial joint angles
  double sample_rate = 0.0;           // 0 = config.sample_rate
};

// Runs from rest for `duration` seconds and samples all markers at the
// sample rate (linear interpolation between integration steps). Divergence
// propagates as DivergenceError.
SimTrajectory simulate(const SwimmerConfig& config, const Controller& controller, double duration,
                       const SimulateOptions& options = {});

// Planar projection of the marker positions.
MarkerFrame MarkerFrameOf(const Swimmer& swimmer);

}  // namespace fishsim

#endif  // FISHSIM_SWIMMER_H_
