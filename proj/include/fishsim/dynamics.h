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

// Articulated rigid-body tree in reduced coordinates.
//
// Body 0 is the base (free-floating or fixed). Every other body b is attached
// to an earlier body through hinge joint b-1, so joint angles are generalized
// coordinates and the assembly never drifts. Added mass enters the mass
// matrix; everything else arrives as applied wrenches.

#ifndef FISHSIM_DYNAMICS_H_
#define FISHSIM_DYNAMICS_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fishsim/core.h"

namespace fishsim {

struct RigidBodyProps {
  std::string name;
  double mass = 1.0;                  // kg
  Vec3 inertia = Vec3::Ones();        // kg m^2, principal, body frame
  Vec3 added_mass = Vec3::Zero();     // kg, body frame diagonal
  Vec3 added_inertia = Vec3::Zero();  // kg m^2, body frame diagonal
};

struct HingeJoint {
  int parent = 0;
  int child = 1;
  Vec3 axis = Vec3::UnitZ();           // unit, parent frame
  Vec3 parent_anchor = Vec3::Zero();   // joint location from the parent COM, parent frame
  Vec3 child_anchor = Vec3::Zero();    // joint location from the child COM, child frame
  double stiffness = 0.0;              // N m / rad
  double damping = 0.0;                // N m s / rad
  double rest_angle = 0.0;             // rad
  double limit = kPi / 3.0;            // mechanical stop, |angle| <= limit
};

struct JointState {
  double angle = 0.0;  // rad
  double rate = 0.0;   // rad/s
};

// tau = -k (angle - rest) - d rate.
double joint_passive_torque(const HingeJoint& joint, const JointState& state);

// Vertical spring-damper holding a body at height z0. Only the z component is
// non-zero.
Vec3 surface_constraint_force(const BodyState& body, double k_z, double d_z, double z0 = 0.0);

struct ChainModel {
  std::vector<RigidBodyProps> bodies;
  std::vector<HingeJoint> joints;  // joints[i].child == i + 1
  bool fixed_base = false;

  int num_dofs() const { return (fixed_base ? 0 : 6) + static_cast<int>(joints.size()); }
  // Throws Error if the topology or any parameter is invalid.
  void Validate() const;
};

struct ArticulatedState {
  std::vector<BodyState> bodies;  // bodies[0] is the base
  std::vector<JointState> joints;
  double time = 0.0;
};

class DivergenceError : public Error {
 public:
  DivergenceError(int body, double time);
  int body() const { return body_; }
  double time() const { return time_; }

 private:
  int body_;
  double time_;
};

// Largest accepted integration step.
inline constexpr double kMaxTimeStep = 2e-3;

// Places base and joint values into a full state with consistent body poses
// and velocities.
ArticulatedState MakeState(const ChainModel& model, const BodyState& base,
                           std::span<const JointState> joints, double time = 0.0);

// Recomputes bodies[1..] from the base and joint coordinates.
void ForwardKinematics(const ChainModel& model, ArticulatedState* state);

// World-frame position of joint j and its world-frame axis.
Vec3 JointWorldAnchor(const ChainModel& model, const ArticulatedState& state, int j);

// One semi-implicit Euler step. `applied` holds one world-frame wrench per
// body, about its COM. Throws DivergenceError on a non-finite result.
ArticulatedState step(const ChainModel& model, const ArticulatedState& state,
                      std::span<const Wrench> applied, double dt);

// Kinetic energy including added-mass fluid energy, plus joint spring energy.
double KineticEnergy(const ChainModel& model, const ArticulatedState& state);
double JointPotentialEnergy(const ChainModel& model, const ArticulatedState& state);

// Generalized mass matrix (added mass included).
Eigen::MatrixXd MassMatrix(const ChainModel& model, const ArticulatedState& state);

}  // namespace fishsim

#endif  // FISHSIM_DYNAMICS_H_
