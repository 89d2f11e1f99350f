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

// Lighthill elongated-body baseline: reactive thrust at the tail tip against
// quadratic drag, balanced for the cruising speed.
//
//   T = m [ mean(dh/dt^2) - U^2 mean(dh/dx^2) ],  m = rho pi beta d^2 / 4
//   D = rho c_D S U^2 / 2

#ifndef FISHSIM_EBT_H_
#define FISHSIM_EBT_H_

#include <cstdint>
#include <vector>

#include "fishsim/config.h"
#include "fishsim/data.h"
#include "fishsim/optimize.h"

namespace fishsim {

struct EbtParams {
  double beta = 1.0;         // added-mass factor, [0.9, 1.1]
  double drag_coeff = 0.31;  // c_D, [0, 10]
  double density = 1000.0;   // kg/m^3
  double surface_area = 0.0; // S, m^2
  double depth = 0.0;        // tail-tip submerged depth d, m

  static constexpr double kBetaMin = 0.9, kBetaMax = 1.1;
  static constexpr double kDragMin = 0.0, kDragMax = 10.0;

  void Validate() const;
  double AddedMassPerLength() const;  // kg/m
};

// Ellipsoid surface area, 4 pi abc R_G(a^-2, b^-2, c^-2).
double EllipsoidSurface(const Vec3& semi_axes);

// S is the summed ellipsoid surface area, d the fin height.
EbtParams EbtParamsFromConfig(const SwimmerConfig& config);

// Lateral displacement of the last two tail markers.
struct TailKinematics {
  std::vector<double> h_tip;
  std::vector<double> h_prev;
  double dt = 0.0;  // s
  double dx = 0.0;  // m, marker spacing
};

struct TailDerivatives {
  double dhdt_sq = 0.0;  // mean (dh/dt)^2 at the tip, m^2/s^2
  double dhdx_sq = 0.0;  // mean (dh/dx)^2 at the tip
};

// Head-frame lateral coordinates of the fin marker and the last spine
// marker after the warmup; dx is their mean head-frame x spacing.
TailKinematics TailKinematicsFromTrajectory(const MarkerTrajectory& traj, double warmup);

// Central differences in time, (h_tip - h_prev) / dx in space.
TailDerivatives tail_derivatives(const TailKinematics& k);

double EbtThrust(const TailDerivatives& d, const EbtParams& p, double speed);
double EbtDrag(const EbtParams& p, double speed);

// Non-negative root of T(U) = D(U); 0 for a still tail.
double cruise_speed(const TailDerivatives& d, const EbtParams& p);

struct EbtSample {
  TailDerivatives derivatives;
  double measured_speed = 0.0;  // m/s
};

struct EbtFitOptions {
  int global_evals = 60;
  int local_evals = 100;
  uint64_t seed = 0;
};

struct EbtFit {
  EbtParams params;
  FitResult fit;         // over (beta, c_D)
  double mean_abs_error = 0.0;  // m/s
};

// Minimizes mean |U_pred - U_meas| over beta and c_D within their bounds.
EbtFit fit_ebt(const std::vector<EbtSample>& samples, const EbtParams& base, const EbtFitOptions& options = {});

}  // namespace fishsim

#endif  // FISHSIM_EBT_H_
