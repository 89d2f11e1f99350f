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

#include "fishsim/env.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fishsim {
namespace {

double WrapAngle(double a) { return std::remainder(a, 2.0 * kPi); }

// Sign that makes a positive bias turn the swimmer toward positive yaw.
constexpr double kBiasSign = 1.0;

// PD gains of the motor-angle tracking loop (natural frequency 4 Hz).
constexpr double kTrackOmega = 2.0 * kPi * 4.0;
constexpr double kTrackDamping = 0.7;
constexpr double kMaxMotorAngle = 2.8;  // rad, keeps a_des away from the +-pi wrap

}  // namespace

void EnvConfig::Validate() const {
  if (!(box_x_max > box_x_min) || !(box_y_max > box_y_min)) throw Error("env: empty target box");
  if (!(success_radius > 0.0)) throw Error("env: success radius must be positive");
  if (!(horizon > 0.0)) throw Error("env: horizon must be positive");
  if (!(action_scale > 0.0)) throw Error("env: action scale must be positive");
  if (!(max_flap_hz > 0.0)) throw Error("env: max flap frequency must be positive");
  if (physics_steps < 1) throw Error("env: at least one physics step per action");
  if (observed_joints < 0) throw Error("env: observed joint count must be non-negative");
}

Observation ObserveSwimmer(const Swimmer& swimmer, const Vec3& target, double prev_action, int observed_joints) {
  const ArticulatedState& s = swimmer.state();
  const BodyState& head = s.bodies[0];
  const MotorState& motor = swimmer.motor();
  if (observed_joints > static_cast<int>(s.joints.size())) throw Error("env: more observed joints than hinges");

  Observation obs;
  obs.reserve(14 + 2 * observed_joints);
  obs.push_back(std::cos(motor.angle));
  obs.push_back(std::sin(motor.angle));
  obs.push_back(motor.rate);
  for (int i = 0; i < 3; ++i) obs.push_back(head.ang_vel[i]);
  for (int j = 0; j < observed_joints; ++j) {
    obs.push_back(s.joints[j].angle);
    obs.push_back(s.joints[j].rate);
  }
  const Vec3 com = swimmer.CenterOfMass();
  Vec3 world_d = target - com;
  world_d.z() = 0.0;
  Vec3 com_vel = swimmer.CenterOfMassVelocity();
  com_vel.z() = 0.0;
  const Vec3 d = head.orient.conjugate() * world_d;
  // d/dt (R^T (p - c)) for a fixed target.
  const Vec3 d_dot = -head.ang_vel.cross(d) - head.orient.conjugate() * com_vel;
  obs.push_back(d.norm());
  for (int i = 0; i < 3; ++i) obs.push_back(d[i]);
  for (int i = 0; i < 3; ++i) obs.push_back(d_dot[i]);
  obs.push_back(prev_action);
  return obs;
}

SwimEnv::SwimEnv(const SwimmerConfig& swimmer_config, const EnvConfig& config)
    : swimmer_config_(swimmer_config), config_(config) {
  config_.Validate();
  swimmer_config_.motor.max_rate = 2.0 * kPi * config_.max_flap_hz;
  swimmer_ = std::make_unique<Swimmer>(swimmer_config_);
  if (config_.observed_joints > swimmer_->num_tail_joints()) {
    throw Error("env: more observed joints than tail hinges");
  }
}

Observation SwimEnv::Reset(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(config_.box_x_min, config_.box_x_max);
  std::uniform_real_distribution<double> uy(config_.box_y_min, config_.box_y_max);
  const double x = ux(rng);
  const double y = uy(rng);
  return ResetWithTarget(Vec3(x, y, swimmer_config_.surface.z0));
}

Observation SwimEnv::ResetWithTarget(const Vec3& target, double motor_angle) {
  swimmer_->Reset(motor_angle);
  target_ = target;
  prev_action_ = 0.0;
  return Observe();
}

Observation SwimEnv::Observe() const {
  return ObserveSwimmer(*swimmer_, target_, prev_action_, config_.observed_joints);
}

double SwimEnv::Distance() const {
  Vec3 d = target_ - swimmer_->CenterOfMass();
  d.z() = 0.0;
  return d.norm();
}

StepResult SwimEnv::Step(double action) {
  StepResult r;
  double u = action;
  if (std::isnan(u)) {
    u = 0.0;
    r.info.clamped = true;
  } else if (u > 1.0 || u < -1.0) {
    u = std::clamp(u, -1.0, 1.0);
    r.info.clamped = true;
  }
  const MotorCommand command{MotorMode::kAcceleration, config_.action_scale * u};
  for (int i = 0; i < config_.physics_steps; ++i) swimmer_->Step(command);
  prev_action_ = u;

  r.info.distance = Distance();
  r.info.flap_frequency = std::abs(swimmer_->motor().rate) / (2.0 * kPi);
  r.info.success = r.info.distance <= config_.success_radius;
  r.reward = -r.info.distance - config_.action_penalty * std::abs(u) + (r.info.success ? config_.goal_bonus : 0.0);
  r.done = r.info.success || swimmer_->time() >= config_.horizon - 1e-9;
  r.observation = Observe();
  return r;
}

double CircleDistance(const Vec3& p, const Vec3& center, double radius) {
  return std::abs(std::hypot(p.x() - center.x(), p.y() - center.y()) - radius);
}

// ---- Controllers ----------------------------------------------------------

BiasedSinusoidParams BiasedSinusoidParams::FromArray(const std::array<double, 4>& a) {
  return {a[0], a[1], a[2], a[3]};
}

BiasedSinusoidPolicy::BiasedSinusoidPolicy(const BiasedSinusoidParams& params, const EnvConfig& env,
                                           double control_dt)
    : params_(params), env_(env), control_dt_(control_dt) {
  params_.frequency = std::clamp(params_.frequency, 0.0, env.max_flap_hz);
}

double BiasedSinusoidPolicy::Act(const Observation& obs) {
  const int j = env_.observed_joints;
  const double alpha = std::atan2(obs[1], obs[0]);
  const double alpha_dot = obs[2];
  const double dx = obs[7 + 2 * j], dy = obs[8 + 2 * j];
  const double heading_error = (dx == 0.0 && dy == 0.0) ? 0.0 : std::atan2(dy, dx);

  // Aim half a control interval ahead to offset the zero-order hold.
  const double t = t_ + 0.5 * control_dt_;
  const double w = 2.0 * kPi * params_.frequency;
  const double a = params_.amplitude;
  double target = kBiasSign * (params_.bias + params_.heading_gain * heading_error) + a * std::sin(w * t);
  target = std::clamp(target, -kMaxMotorAngle, kMaxMotorAngle);
  const double target_rate = a * w * std::cos(w * t);
  const double feedforward = -a * w * w * std::sin(w * t);

  const double kp = kTrackOmega * kTrackOmega;
  const double kd = 2.0 * kTrackDamping * kTrackOmega;
  const double accel = feedforward + kp * WrapAngle(target - alpha) + kd * (target_rate - alpha_dot);
  t_ += control_dt_;
  return std::clamp(accel / env_.action_scale, -1.0, 1.0);
}

Episode RunEpisode(SwimEnv& env, Policy& policy, const Vec3& target, double motor_angle) {
  Episode ep;
  policy.Reset();
  Observation obs = env.ResetWithTarget(target, motor_angle);
  for (;;) {
    const StepResult r = env.Step(policy.Act(obs));
    ep.episode_return += r.reward;
    ++ep.steps;
    obs = r.observation;
    if (r.done) {
      ep.success = r.info.success;
      ep.final_distance = r.info.distance;
      break;
    }
  }
  ep.time = env.time();
  return ep;
}

// ---- Cross-entropy method -------------------------------------------------

std::vector<Vec3> SampleTargets(const EnvConfig& env_config, uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(env_config.box_x_min, env_config.box_x_max);
  std::uniform_real_distribution<double> uy(env_config.box_y_min, env_config.box_y_max);
  std::vector<Vec3> out;
  for (int i = 0; i < count; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    out.emplace_back(x, y, 0.0);
  }
  return out;
}

double EvaluatePolicy(const SwimmerConfig& swimmer_config, const EnvConfig& env_config,
                      const BiasedSinusoidParams& params, const std::vector<Vec3>& targets, int* successes) {
  if (targets.empty()) throw Error("policy evaluation needs at least one target");
  SwimEnv env(swimmer_config, env_config);
  BiasedSinusoidPolicy policy(params, env_config, env.control_dt());
  double total = 0.0;
  int ok = 0;
  for (const Vec3& t : targets) {
    Vec3 target = t;
    target.z() = swimmer_config.surface.z0;
    Episode ep;
    try {
      ep = RunEpisode(env, policy, target);
    } catch (const DivergenceError&) {
      ep.episode_return = -1e9;
    }
    total += ep.episode_return;
    ok += ep.success ? 1 : 0;
  }
  if (successes) *successes = ok;
  return total / targets.size();
}

CemResult cem_train(const SwimmerConfig& swimmer_config, const EnvConfig& env_config, const CemOptions& options,
                    const CemBounds& bounds) {
  if (options.population < 1 || options.elites < 1 || options.elites > options.population) {
    throw Error("cem: need 1 <= elites <= population");
  }
  const std::vector<Vec3> targets =
      options.eval_targets.empty() ? SampleTargets(env_config, options.seed + 1, 8) : options.eval_targets;
  std::mt19937_64 rng(options.seed);

  struct Member {
    std::array<double, 4> x;
    double value;
  };
  CemResult result;
  result.best_return = -std::numeric_limits<double>::infinity();
  auto evaluate = [&](const std::array<double, 4>& x) {
    result.episodes += static_cast<int>(targets.size());
    return EvaluatePolicy(swimmer_config, env_config, BiasedSinusoidParams::FromArray(x), targets);
  };
  auto record = [&](std::vector<Member>& pop) {
    std::stable_sort(pop.begin(), pop.end(), [](const Member& a, const Member& b) { return a.value > b.value; });
    CemGeneration g;
    for (int i = 0; i < options.elites; ++i) g.elite_mean += pop[i].value / options.elites;
    g.best = pop[0].value;
    for (int k = 0; k < 4; ++k) {
      for (int i = 0; i < options.elites; ++i) g.mean[k] += pop[i].x[k] / options.elites;
    }
    if (pop[0].value > result.best_return) {
      result.best_return = pop[0].value;
      result.best = BiasedSinusoidParams::FromArray(pop[0].x);
    }
    result.history.push_back(g);
  };

  std::vector<Member> pop;
  for (int i = 0; i < options.population; ++i) {
    std::array<double, 4> x;
    for (int k = 0; k < 4; ++k) x[k] = std::uniform_real_distribution<double>(bounds.lower[k], bounds.upper[k])(rng);
    pop.push_back({x, evaluate(x)});
  }
  record(pop);

  for (int gen = 0; gen < options.generations; ++gen) {
    std::array<double, 4> mean{}, stddev{};
    for (int k = 0; k < 4; ++k) {
      for (int i = 0; i < options.elites; ++i) mean[k] += pop[i].x[k] / options.elites;
      double var = 0.0;
      for (int i = 0; i < options.elites; ++i) var += std::pow(pop[i].x[k] - mean[k], 2) / options.elites;
      stddev[k] = std::max(std::sqrt(var), options.min_std * (bounds.upper[k] - bounds.lower[k]));
    }
    std::vector<Member> next(pop.begin(), pop.begin() + options.elites);
    std::normal_distribution<double> normal(0.0, 1.0);
    while (static_cast<int>(next.size()) < options.population + options.elites) {
      std::array<double, 4> x;
      for (int k = 0; k < 4; ++k) x[k] = std::clamp(mean[k] + stddev[k] * normal(rng), bounds.lower[k], bounds.upper[k]);
      next.push_back({x, evaluate(x)});
    }
    pop = std::move(next);
    record(pop);
  }
  return result;
}

// ---- Waypoints ------------------------------------------------------------

std::vector<Vec3> CircleWaypoints(const Vec3& center, double radius, int count) {
  std::vector<Vec3> out;
  // Start angle of the origin as seen from the center.
  const double start = std::atan2(-center.y(), -center.x());
  for (int i = 1; i <= count; ++i) {
    const double a = start + 2.0 * kPi * i / count;
    out.emplace_back(center.x() + radius * std::cos(a), center.y() + radius * std::sin(a), center.z());
  }
  return out;
}

WaypointReport evaluate_waypoints(SwimEnv& env, Policy& policy, const std::vector<Vec3>& waypoints,
                                  const Vec3& center, double radius, const WaypointOptions& options) {
  if (waypoints.empty()) throw Error("waypoint evaluation needs at least one waypoint");
  WaypointReport report;
  policy.Reset();
  size_t active = 0;
  Observation obs = env.ResetWithTarget(waypoints[0]);
  double sum = 0.0;
  int n = 0;
  while (env.time() < options.duration - 1e-9 && active < waypoints.size()) {
    env.Step(policy.Act(obs));
    const Vec3 com = env.swimmer().CenterOfMass();
    report.com_track.push_back(com);
    const double dist = CircleDistance(com, center, radius);
    sum += dist;
    report.max_distance = std::max(report.max_distance, dist);
    ++n;
    if (env.Distance() <= options.capture_radius) {
      ++report.reached;
      ++active;
      if (active < waypoints.size()) env.SetTarget(waypoints[active]);
    }
    obs = env.Observe();
  }
  report.mean_distance = n > 0 ? sum / n : CircleDistance(env.swimmer().CenterOfMass(), center, radius);
  return report;
}

}  // namespace fishsim
