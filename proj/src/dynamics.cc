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

#include "fishsim/dynamics.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

namespace fishsim {
namespace {

// World-frame kinematics of every body, plus the velocity-product
// accelerations obtained with zero generalized acceleration.
struct Kinematics {
  std::vector<Mat3> rot;
  std::vector<Vec3> pos, vel, omega;
  std::vector<Vec3> bias_acc, bias_alpha;
  std::vector<Vec3> anchor, axis;  // per joint
};

Kinematics ComputeKinematics(const ChainModel& model, const BodyState& base,
                             std::span<const JointState> joints) {
  const size_t nb = model.bodies.size();
  Kinematics k;
  k.rot.resize(nb);
  k.pos.resize(nb);
  k.vel.resize(nb);
  k.omega.resize(nb);
  k.bias_acc.assign(nb, Vec3::Zero());
  k.bias_alpha.assign(nb, Vec3::Zero());
  k.anchor.resize(model.joints.size());
  k.axis.resize(model.joints.size());

  k.rot[0] = base.orient.toRotationMatrix();
  k.pos[0] = base.pos;
  k.vel[0] = base.lin_vel;
  k.omega[0] = k.rot[0] * base.ang_vel;
  for (size_t j = 0; j < model.joints.size(); ++j) {
    const HingeJoint& hj = model.joints[j];
    const int p = hj.parent, c = hj.child;
    const double angle = joints[j].angle, rate = joints[j].rate;
    const Vec3 u = k.rot[p] * hj.axis;
    const Vec3 r1 = k.rot[p] * hj.parent_anchor;
    k.rot[c] = k.rot[p] * Eigen::AngleAxisd(angle, hj.axis).toRotationMatrix();
    const Vec3 r2 = -(k.rot[c] * hj.child_anchor);
    k.anchor[j] = k.pos[p] + r1;
    k.axis[j] = u;
    k.pos[c] = k.anchor[j] + r2;
    k.omega[c] = k.omega[p] + u * rate;
    k.vel[c] = k.vel[p] + k.omega[p].cross(r1) + k.omega[c].cross(r2);
    k.bias_alpha[c] = k.bias_alpha[p] + k.omega[p].cross(u * rate);
    k.bias_acc[c] = k.bias_acc[p] + k.bias_alpha[p].cross(r1) +
                    k.omega[p].cross(k.omega[p].cross(r1)) + k.bias_alpha[c].cross(r2) +
                    k.omega[c].cross(k.omega[c].cross(r2));
  }
  return k;
}

// 6 x n Jacobian of body b's COM velocity (rows 0-2) and angular velocity
// (rows 3-5) with respect to the generalized velocities.
Eigen::Matrix<double, 6, Eigen::Dynamic> BodyJacobian(const ChainModel& model,
                                                      const Kinematics& k, int b) {
  const int base_dofs = model.fixed_base ? 0 : 6;
  Eigen::Matrix<double, 6, Eigen::Dynamic> jac =
      Eigen::Matrix<double, 6, Eigen::Dynamic>::Zero(6, model.num_dofs());
  if (!model.fixed_base) {
    jac.block<3, 3>(0, 0).setIdentity();
    jac.block<3, 3>(0, 3) = -Skew(k.pos[b] - k.pos[0]);
    jac.block<3, 3>(3, 3).setIdentity();
  }
  for (int body = b; body > 0;) {
    const int j = body - 1;
    const Vec3& u = k.axis[j];
    jac.block<3, 1>(0, base_dofs + j) = u.cross(k.pos[b] - k.anchor[j]);
    jac.block<3, 1>(3, base_dofs + j) = u;
    body = model.joints[j].parent;
  }
  return jac;
}

struct BodyMass {
  Mat3 translational;  // m I + R M_A R^T
  Mat3 rotational;     // R (I + I_A) R^T
  Mat3 solid_inertia;  // R I R^T
};

BodyMass WorldMass(const RigidBodyProps& body, const Mat3& rot) {
  BodyMass m;
  m.translational = body.mass * Mat3::Identity() + rot * body.added_mass.asDiagonal() * rot.transpose();
  m.solid_inertia = rot * body.inertia.asDiagonal() * rot.transpose();
  m.rotational = m.solid_inertia + rot * body.added_inertia.asDiagonal() * rot.transpose();
  return m;
}

std::string DivergenceMessage(int body, double time) {
  std::ostringstream os;
  os << "simulation diverged: body " << body << " non-finite at t=" << time << " s";
  return os.str();
}

}  // namespace

DivergenceError::DivergenceError(int body, double time)
    : Error(DivergenceMessage(body, time)), body_(body), time_(time) {}

double joint_passive_torque(const HingeJoint& joint, const JointState& state) {
  return -joint.stiffness * (state.angle - joint.rest_angle) - joint.damping * state.rate;
}

Vec3 surface_constraint_force(const BodyState& body, double k_z, double d_z, double z0) {
  return Vec3(0.0, 0.0, -k_z * (body.pos.z() - z0) - d_z * body.lin_vel.z());
}

void ChainModel::Validate() const {
  if (bodies.empty()) throw Error("chain model has no bodies");
  if (joints.size() + 1 != bodies.size()) {
    throw Error("chain model needs exactly one joint per non-base body");
  }
  for (size_t j = 0; j < joints.size(); ++j) {
    const HingeJoint& hj = joints[j];
    if (hj.child != static_cast<int>(j) + 1 || hj.parent < 0 || hj.parent >= hj.child) {
      throw Error("joint " + std::to_string(j) + " breaks the parent-before-child ordering");
    }
    if (std::abs(hj.axis.norm() - 1.0) > 1e-9) {
      throw Error("joint " + std::to_string(j) + " axis is not unit length");
    }
    if (hj.stiffness < 0.0 || hj.damping < 0.0 || !(hj.limit > 0.0)) {
      throw Error("joint " + std::to_string(j) + " has negative stiffness/damping or no range");
    }
  }
  for (const RigidBodyProps& b : bodies) {
    if (!(b.mass > 0.0) || (b.inertia.array() <= 0.0).any() || (b.added_mass.array() < 0.0).any() ||
        (b.added_inertia.array() < 0.0).any()) {
      throw Error("body '" + b.name + "' has invalid mass properties");
    }
  }
}

ArticulatedState MakeState(const ChainModel& model, const BodyState& base,
                           std::span<const JointState> joints, double time) {
  ArticulatedState s;
  s.bodies.assign(model.bodies.size(), BodyState{});
  s.bodies[0] = base;
  s.joints.assign(joints.begin(), joints.end());
  s.joints.resize(model.joints.size());
  s.time = time;
  ForwardKinematics(model, &s);
  return s;
}

void ForwardKinematics(const ChainModel& model, ArticulatedState* state) {
  const Kinematics k = ComputeKinematics(model, state->bodies[0], state->joints);
  for (size_t b = 1; b < model.bodies.size(); ++b) {
    BodyState& out = state->bodies[b];
    out.pos = k.pos[b];
    out.orient = Quat(k.rot[b]).normalized();
    out.lin_vel = k.vel[b];
    out.ang_vel = k.rot[b].transpose() * k.omega[b];
  }
}

Vec3 JointWorldAnchor(const ChainModel& model, const ArticulatedState& state, int j) {
  const HingeJoint& hj = model.joints[j];
  const BodyState& parent = state.bodies[hj.parent];
  return parent.pos + parent.orient * hj.parent_anchor;
}

Eigen::MatrixXd MassMatrix(const ChainModel& model, const ArticulatedState& state) {
  const Kinematics k = ComputeKinematics(model, state.bodies[0], state.joints);
  const int n = model.num_dofs();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (size_t b = 0; b < model.bodies.size(); ++b) {
    const auto jac = BodyJacobian(model, k, static_cast<int>(b));
    const BodyMass m = WorldMass(model.bodies[b], k.rot[b]);
    h += jac.topRows<3>().transpose() * m.translational * jac.topRows<3>() +
         jac.bottomRows<3>().transpose() * m.rotational * jac.bottomRows<3>();
  }
  return h;
}

ArticulatedState step(const ChainModel& model, const ArticulatedState& state,
                      std::span<const Wrench> applied, double dt) {
  if (!(dt > 0.0 && dt <= kMaxTimeStep)) throw Error("time step outside (0, 2e-3] s");
  if (applied.size() != model.bodies.size()) throw Error("one applied wrench per body required");

  const Kinematics k = ComputeKinematics(model, state.bodies[0], state.joints);
  const int n = model.num_dofs();
  const int base_dofs = model.fixed_base ? 0 : 6;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
  for (size_t b = 0; b < model.bodies.size(); ++b) {
    const Wrench& w = applied[b];
    if (w.frame != Frame::kWorld) throw Error("applied wrenches must be in the world frame");
    const auto jac = BodyJacobian(model, k, static_cast<int>(b));
    const BodyMass m = WorldMass(model.bodies[b], k.rot[b]);
    const Vec3 force = w.force - m.translational * k.bias_acc[b];
    const Vec3 torque = w.torque - m.rotational * k.bias_alpha[b] -
                        k.omega[b].cross(m.solid_inertia * k.omega[b]);
    h += jac.topRows<3>().transpose() * m.translational * jac.topRows<3>() +
         jac.bottomRows<3>().transpose() * m.rotational * jac.bottomRows<3>();
    q += jac.topRows<3>().transpose() * force + jac.bottomRows<3>().transpose() * torque;
  }
  // Joint dampers are implicit in the end-of-step rate; the spring uses the
  // trapezoidal mean of the current and end-of-step angle.
  for (size_t j = 0; j < model.joints.size(); ++j) {
    const HingeJoint& joint = model.joints[j];
    const int i = base_dofs + static_cast<int>(j);
    q[i] += joint_passive_torque(joint, state.joints[j]) - 0.5 * dt * joint.stiffness * state.joints[j].rate;
    h(i, i) += dt * joint.damping + 0.5 * dt * dt * joint.stiffness;
  }
  const Eigen::VectorXd qdd = h.ldlt().solve(q);

  ArticulatedState next = state;
  next.time = state.time + dt;
  BodyState& base = next.bodies[0];
  if (!model.fixed_base) {
    const Vec3 v = k.vel[0] + dt * qdd.segment<3>(0);
    const Vec3 w = k.omega[0] + dt * qdd.segment<3>(3);
    base.lin_vel = v;
    base.pos = state.bodies[0].pos + dt * v;
    base.orient = integrate_orientation(state.bodies[0].orient, k.rot[0].transpose() * w, dt);
    base.ang_vel = base.orient.conjugate() * w;
  }
  for (size_t j = 0; j < model.joints.size(); ++j) {
    JointState& js = next.joints[j];
    const double limit = model.joints[j].limit;
    js.rate = state.joints[j].rate + dt * qdd[base_dofs + j];
    js.angle = state.joints[j].angle + dt * js.rate;
    // Inelastic stop.
    if (js.angle > limit) {
      js.angle = limit;
      js.rate = std::min(js.rate, 0.0);
    } else if (js.angle < -limit) {
      js.angle = -limit;
      js.rate = std::max(js.rate, 0.0);
    }
  }
  ForwardKinematics(model, &next);
  for (size_t b = 0; b < next.bodies.size(); ++b) {
    if (!next.bodies[b].IsFinite()) throw DivergenceError(static_cast<int>(b), next.time);
  }
  return next;
}

double KineticEnergy(const ChainModel& model, const ArticulatedState& state) {
  const Kinematics k = ComputeKinematics(model, state.bodies[0], state.joints);
  double e = 0.0;
  for (size_t b = 0; b < model.bodies.size(); ++b) {
    const BodyMass m = WorldMass(model.bodies[b], k.rot[b]);
    e += 0.5 * k.vel[b].dot(m.translational * k.vel[b]) +
         0.5 * k.omega[b].dot(m.rotational * k.omega[b]);
  }
  return e;
}

double JointPotentialEnergy(const ChainModel& model, const ArticulatedState& state) {
  double e = 0.0;
  for (size_t j = 0; j < model.joints.size(); ++j) {
    const double d = state.joints[j].angle - model.joints[j].rest_angle;
    e += 0.5 * model.joints[j].stiffness * d * d;
  }
  return e;
}

}  // namespace fishsim
