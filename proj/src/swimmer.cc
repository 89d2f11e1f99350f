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

#include "fishsim/swimmer.h"

#include <chrono>
#include <cmath>

namespace fishsim {

Swimmer::Swimmer(const SwimmerConfig& config, SwimmerOptions options)
    : config_(config), options_(options) {
  config_.Validate();
  const auto& g = config_.geometry;
  const int segments = g.segment_count;

  std::vector<Vec3> semi;
  semi.push_back(g.head_semi_axes);
  for (int i = 0; i < segments; ++i) semi.push_back(g.segment_semi_axes);
  semi.push_back(g.fin_semi_axes);

  double volume = 0.0;
  for (const Vec3& s : semi) volume += 4.0 / 3.0 * kPi * s.prod();
  const double body_density = config_.total_mass / volume;
  const double fluid_density = options_.medium == Medium::kWater ? config_.fluid.density : 0.0;

  const double omega_z = 2.0 * kPi * config_.surface.frequency_hz;
  for (size_t b = 0; b < semi.size(); ++b) {
    geoms_.push_back(MakeEllipsoid(semi[b], body_density, fluid_density));
    const EllipsoidGeom& geom = geoms_.back();
    RigidBodyProps props;
    props.name = b == 0 ? "head" : b + 1 == semi.size() ? "fin" : "segment" + std::to_string(b);
    props.mass = geom.mass;
    props.inertia = geom.inertia;
    props.added_mass = geom.added_mass;
    props.added_inertia = geom.added_inertia;
    model_.bodies.push_back(props);

    const double m_eff = geom.mass + geom.added_mass.z();
    surface_stiffness_.push_back(m_eff * omega_z * omega_z);
    surface_damping_.push_back(2.0 * config_.surface.damping_ratio * m_eff * omega_z);
  }
  for (size_t b = 1; b < semi.size(); ++b) {
    HingeJoint j;
    j.parent = static_cast<int>(b) - 1;
    j.child = static_cast<int>(b);
    j.axis = Vec3::UnitZ();
    j.parent_anchor = Vec3(-semi[b - 1].x(), 0.0, 0.0);
    j.child_anchor = Vec3(semi[b].x(), 0.0, 0.0);
    j.stiffness = config_.joints.stiffness;
    j.damping = config_.joints.damping;
    j.limit = config_.joints.limit_deg * kPi / 180.0;
    model_.joints.push_back(j);
  }
  model_.fixed_base = options_.fixed_head;
  model_.Validate();

  // Markers: five on the head, five spread along the spine, one on the fin tip.
  const Vec3& h = g.head_semi_axes;
  markers_[0] = {0, Vec3(-0.6 * h.x(), 0.0, 0.0)};
  markers_[1] = {0, Vec3(0.6 * h.x(), 0.0, 0.0)};
  markers_[2] = {0, Vec3(0.0, 0.5 * h.y(), 0.0)};
  markers_[3] = {0, Vec3(0.0, -0.5 * h.y(), 0.0)};
  markers_[4] = {0, Vec3(0.9 * h.x(), 0.0, 0.0)};
  const double seg_len = 2.0 * g.segment_semi_axes.x();
  const double tail_len = segments * seg_len;
  for (int k = 0; k < kSpineMarkers; ++k) {
    const double s = (k + 0.5) / kSpineMarkers * tail_len;
    const int seg = std::min(segments - 1, static_cast<int>(s / seg_len));
    markers_[kHeadMarkers + k] = {1 + seg, Vec3(g.segment_semi_axes.x() - (s - seg * seg_len), 0.0, 0.0)};
  }
  markers_[kMarkerCount - 1] = {segments + 1, Vec3(-g.fin_semi_axes.x(), 0.0, 0.0)};

  Reset(0.0);

  const double r = config_.tendon.lateral_offset;
  for (int t = 0; t < 2; ++t) {
    TendonRouting& routing = tendons_[t];
    routing.side = t == 0 ? TendonSide::kLeft : TendonSide::kRight;
    const double sign = t == 0 ? 1.0 : -1.0;
    routing.vias.push_back({0, Vec3(config_.tendon.head_via_x, sign * r, 0.0)});
    for (int b = 1; b <= segments + 1; ++b) {
      const double side = (b - 1 >= config_.tendon.crossover_index) ? -sign : sign;
      routing.vias.push_back({b, Vec3(0.0, side * r, 0.0)});
    }
    routing.stiffness = config_.tendon.stiffness;
    routing.rest_length = tendon_length(routing, state_.bodies);
  }
}

void Swimmer::Reset(double motor_angle) {
  BodyState base;
  base.pos = Vec3(0.0, 0.0, config_.surface.z0);
  std::vector<JointState> joints(model_.joints.size());
  state_ = MakeState(model_, base, joints, 0.0);
  motor_ = MotorState{};
  motor_.angle = motor_angle;
  motor_.max_rate = config_.motor.max_rate;
  motor_.crank_arm = config_.motor.crank_arm;
  motor_.rod_length = config_.motor.rod_length;
}

void Swimmer::SetJointAngles(std::span<const double> angles) {
  for (size_t j = 0; j < angles.size() && j < state_.joints.size(); ++j) {
    state_.joints[j].angle = angles[j];
  }
  ForwardKinematics(model_, &state_);
}

std::vector<Wrench> Swimmer::AppliedWrenches() const {
  const size_t nb = model_.bodies.size();
  std::vector<Wrench> applied(nb, Wrench::Zero(Frame::kWorld));
  for (size_t b = 0; b < nb; ++b) {
    const BodyState& body = state_.bodies[b];
    if (options_.medium == Medium::kWater) {
      applied[b] += total_fluid_wrench(body, VelocityOnlyAccel(body), geoms_[b], config_.fluid);
    }
    if (!options_.fixed_head) {
      applied[b].force += surface_constraint_force(body, surface_stiffness_[b], surface_damping_[b],
                                                   config_.surface.z0);
    }
  }
  if (options_.tendons) {
    for (const TendonRouting& routing : tendons_) {
      const std::vector<Wrench> t = tendon_forces(routing, state_.bodies, motor_);
      for (size_t b = 0; b < nb; ++b) applied[b] += t[b];
    }
  }
  return applied;
}

void Swimmer::Step(const MotorCommand& command) {
  motor_ = motor_step(motor_, command, config_.dt);
  const std::vector<Wrench> applied = AppliedWrenches();
  state_ = step(model_, state_, applied, config_.dt);
}

std::array<Vec3, kMarkerCount> Swimmer::MarkerPositions() const {
  std::array<Vec3, kMarkerCount> out;
  for (int i = 0; i < kMarkerCount; ++i) {
    const BodyState& b = state_.bodies[markers_[i].body];
    out[i] = b.pos + b.orient * markers_[i].offset;
  }
  return out;
}

double Swimmer::TotalMass() const {
  double m = 0.0;
  for (const RigidBodyProps& b : model_.bodies) m += b.mass;
  return m;
}

Vec3 Swimmer::CenterOfMass() const {
  Vec3 c = Vec3::Zero();
  for (size_t b = 0; b < model_.bodies.size(); ++b) c += model_.bodies[b].mass * state_.bodies[b].pos;
  return c / TotalMass();
}

Vec3 Swimmer::CenterOfMassVelocity() const {
  Vec3 c = Vec3::Zero();
  for (size_t b = 0; b < model_.bodies.size(); ++b) c += model_.bodies[b].mass * state_.bodies[b].lin_vel;
  return c / TotalMass();
}

std::array<double, 2> Swimmer::TendonStretch() const {
  std::array<double, 2> out{};
  for (int t = 0; t < 2; ++t) {
    const TendonRouting& r = tendons_[t];
    out[t] = (tendon_length(r, state_.bodies) - ModulatedRestLength(r, motor_)) / r.rest_length;
  }
  return out;
}

Controller ConstantRateController(double rate) {
  return [rate](const Swimmer&) { return MotorCommand{MotorMode::kConstantRate, rate}; };
}

MarkerFrame MarkerFrameOf(const Swimmer& swimmer) {
  MarkerFrame f;
  f.time = swimmer.time();
  const auto pos = swimmer.MarkerPositions();
  f.markers.reserve(pos.size());
  for (const Vec3& p : pos) f.markers.emplace_back(p.x(), p.y());
  return f;
}

SimTrajectory simulate(const SwimmerConfig& config, const Controller& controller, double duration,
                       const SimulateOptions& options) {
  if (!(duration > 0.0)) throw Error("simulation duration must be positive");
  const auto wall_start = std::chrono::steady_clock::now();
  Swimmer swimmer(config, options.swimmer);
  swimmer.Reset(options.motor_phase);
  if (!options.initial_joints.empty()) swimmer.SetJointAngles(options.initial_joints);

  const double rate = options.sample_rate > 0.0 ? options.sample_rate : config.sample_rate;
  const long samples = static_cast<long>(std::floor(duration * rate + 1e-9)) + 1;
  SimTrajectory out;
  out.markers.sample_rate = rate;
  out.markers.frames.reserve(samples);

  MarkerFrame prev = MarkerFrameOf(swimmer);
  out.markers.frames.push_back(prev);
  long k = 1;
  while (k < samples) {
    swimmer.Step(controller(swimmer));
    MarkerFrame cur = MarkerFrameOf(swimmer);
    while (k < samples) {
      const double t = k / rate;
      if (t > cur.time + 1e-12) break;
      const double w = std::clamp((t - prev.time) / (cur.time - prev.time), 0.0, 1.0);
      MarkerFrame f;
      f.time = t;
      f.markers.resize(kMarkerCount);
      for (int i = 0; i < kMarkerCount; ++i) f.markers[i] = (1.0 - w) * prev.markers[i] + w * cur.markers[i];
      out.markers.frames.push_back(std::move(f));
      ++k;
    }
    prev = std::move(cur);
  }
  out.sim_time = swimmer.time();
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return out;
}

}  // namespace fishsim
