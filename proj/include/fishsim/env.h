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

// Target-reaching environment around the swimmer. The agent commands the
// motor's angular acceleration; the observation is expressed in the head
// frame. A biased-sinusoid controller trained by the cross-entropy method
// drives it in-repo.

#ifndef FISHSIM_ENV_H_
#define FISHSIM_ENV_H_

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "fishsim/config.h"
#include "fishsim/swimmer.h"

namespace fishsim {

struct EnvConfig {
  // Target box in the start head frame (x ahead, y to the left), m.
  double box_x_min = 0.0, box_x_max = 4.0;
  double box_y_min = -2.0, box_y_max = 2.0;
  double success_radius = 0.05;  // m
  double goal_bonus = 300.0;
  double action_penalty = 1.0;   // lambda
  double action_scale = 450.0;   // c_action, rad/s^2 per unit action
  double max_flap_hz = 5.0;
  double horizon = 30.0;         // s
  int physics_steps = 20;        // per action
  int observed_joints = 4;       // hinges reported, counted from the head

  void Validate() const;
  int ObservationSize() const { return 3 + 3 + 2 * observed_joints + 1 + 3 + 3 + 1; }
};

inline constexpr int kObservationSize = 22;  // with the default four joints

using Observation = std::vector<double>;

// Observation of a swimmer with a target: cos a, sin a, a_dot, head body
// rates (3), (phi, phi_dot) per observed hinge, |d|, d (3), d_dot (3),
// previous action. d points from the center of mass to the target in the
// head frame.
Observation ObserveSwimmer(const Swimmer& swimmer, const Vec3& target, double prev_action, int observed_joints);

struct StepInfo {
  double distance = 0.0;        // m, center of mass to target
  double flap_frequency = 0.0;  // Hz, |a_dot| / 2 pi
  bool clamped = false;         // action was outside [-1, 1]
  bool success = false;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

class SwimEnv {
 public:
  SwimEnv(const SwimmerConfig& swimmer_config, const EnvConfig& config = {});

  // Swimmer at rest at the origin; target drawn uniformly from the box.
  Observation Reset(uint64_t seed);
  // Swimmer at rest at the origin with a given target and motor angle.
  Observation ResetWithTarget(const Vec3& target, double motor_angle = 0.0);
  StepResult Step(double action);

  // Moves the target without resetting (waypoint following).
  void SetTarget(const Vec3& target) { target_ = target; }
  Observation Observe() const;
  double Distance() const;

  const Swimmer& swimmer() const { return *swimmer_; }
  Swimmer& mutable_swimmer() { return *swimmer_; }
  const EnvConfig& config() const { return config_; }
  const Vec3& target() const { return target_; }
  double time() const { return swimmer_->time(); }
  double control_dt() const { return config_.physics_steps * swimmer_->dt(); }

 private:
  SwimmerConfig swimmer_config_;
  EnvConfig config_;
  std::unique_ptr<Swimmer> swimmer_;
  Vec3 target_ = Vec3::Zero();
  double prev_action_ = 0.0;
};

// Planar distance from p to a circle.
double CircleDistance(const Vec3& p, const Vec3& center, double radius);

// ---- Controllers ----------------------------------------------------------

class Policy {
 public:
  virtual ~Policy() = default;
  virtual void Reset() {}
  virtual double Act(const Observation& obs) = 0;
};

// The motor angle tracks
//   a_des = bias + heading_gain * atan2(d_y, d_x) + amplitude * sin(2 pi f t)
// through a PD law on the commanded acceleration. A positive bias turns the
// swimmer toward positive yaw.
struct BiasedSinusoidParams {
  double amplitude = 1.2;     // rad
  double frequency = 2.0;     // Hz, at most 5
  double bias = 0.0;          // rad
  double heading_gain = 1.0;  // rad per rad of heading error

  std::array<double, 4> AsArray() const { return {amplitude, frequency, bias, heading_gain}; }
  static BiasedSinusoidParams FromArray(const std::array<double, 4>& a);
};

class BiasedSinusoidPolicy : public Policy {
 public:
  BiasedSinusoidPolicy(const BiasedSinusoidParams& params, const EnvConfig& env, double control_dt);
  void Reset() override { t_ = phase_ / (2.0 * kPi * std::max(params_.frequency, 1e-9)); }
  double Act(const Observation& obs) override;
  const BiasedSinusoidParams& params() const { return params_; }
  // Phase of the sinusoid at reset, rad.
  void set_phase(double phase) { phase_ = phase; }

 private:
  BiasedSinusoidParams params_;
  EnvConfig env_;
  double control_dt_;
  double t_ = 0.0;
  double phase_ = 0.0;
};

struct Episode {
  double episode_return = 0.0;
  bool success = false;
  double time = 0.0;            // s
  double final_distance = 0.0;  // m
  int steps = 0;
};

// Resets the policy and runs one episode toward the given target.
Episode RunEpisode(SwimEnv& env, Policy& policy, const Vec3& target, double motor_angle = 0.0);

// ---- Cross-entropy method -------------------------------------------------

struct CemOptions {
  int population = 16;
  int elites = 4;
  int generations = 8;
  uint64_t seed = 0;
  std::vector<Vec3> eval_targets;  // fixed evaluation targets
  double min_std = 0.02;           // fraction of the box width
};

// Parameter box for (amplitude, frequency, bias, heading_gain).
struct CemBounds {
  std::array<double, 4> lower{0.2, 0.5, -1.0, 0.0};
  std::array<double, 4> upper{2.0, 5.0, 1.0, 3.0};
};

struct CemGeneration {
  double elite_mean = 0.0;
  double best = 0.0;
  std::array<double, 4> mean{};
};

struct CemResult {
  BiasedSinusoidParams best;
  double best_return = 0.0;
  std::vector<CemGeneration> history;
  int episodes = 0;
};

// Mean episode return of the policy over the targets.
double EvaluatePolicy(const SwimmerConfig& swimmer_config, const EnvConfig& env_config,
                      const BiasedSinusoidParams& params, const std::vector<Vec3>& targets,
                      int* successes = nullptr);

// Generation 0 samples uniformly in the box; later generations sample the
// elite Gaussian and re-enter the previous elites.
CemResult cem_train(const SwimmerConfig& swimmer_config, const EnvConfig& env_config, const CemOptions& options,
                    const CemBounds& bounds = {});

// Targets drawn uniformly from the box of env_config with a seeded generator.
std::vector<Vec3> SampleTargets(const EnvConfig& env_config, uint64_t seed, int count);

// ---- Waypoints ------------------------------------------------------------

struct WaypointOptions {
  double capture_radius = 0.1;  // m, switch to the next waypoint inside this
  double duration = 120.0;      // s
};

struct WaypointReport {
  double mean_distance = 0.0;  // m, to the path
  double max_distance = 0.0;
  int reached = 0;
  std::vector<Vec3> com_track;  // per control step
};

// Points on a circle through the origin, traversed counter-clockwise.
std::vector<Vec3> CircleWaypoints(const Vec3& center, double radius, int count);

// Follows the waypoints in order; the distance metric is to the circle.
WaypointReport evaluate_waypoints(SwimEnv& env, Policy& policy, const std::vector<Vec3>& waypoints,
                                  const Vec3& center, double radius, const WaypointOptions& options = {});

}  // namespace fishsim

#endif  // FISHSIM_ENV_H_
