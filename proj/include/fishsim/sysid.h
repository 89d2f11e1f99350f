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

// The three identification stages: joint stiffness from the natural
// frequency of a released tail, motor kinematics from out-of-water marker
// tracks, and the five fluid coefficients from in-water marker tracks.

#ifndef FISHSIM_SYSID_H_
#define FISHSIM_SYSID_H_

#include <array>
#include <cstdint>
#include <vector>

#include "fishsim/config.h"
#include "fishsim/data.h"
#include "fishsim/optimize.h"
#include "fishsim/swimmer.h"

namespace fishsim {

using MarkerMask = std::array<bool, kMarkerCount>;
MarkerMask AllMarkers();
MarkerMask TailMarkers();  // spine and fin only

// Mean over frames and masked markers of the planar marker distance, m.
// Throws when the frame counts differ.
double marker_error(const LocalFrameTrajectory& sim, const LocalFrameTrajectory& ref,
                    const MarkerMask& mask = AllMarkers());

// Drops the warmup and expresses the remainder in the head frame.
LocalFrameTrajectory PrepareTrajectory(const MarkerTrajectory& traj, double warmup,
                                       LocalFrameMode mode);

struct Objective {
  LocalFrameTrajectory reference;
  double warmup = 1.0;  // s
  LocalFrameMode mode = LocalFrameMode::kAdvanceNewHeading;
  MarkerMask mask = AllMarkers();

  // Builds the objective from a raw reference track.
  static Objective FromReference(const MarkerTrajectory& ref, double warmup, LocalFrameMode mode,
                                 const MarkerMask& mask = AllMarkers());
  double Evaluate(const MarkerTrajectory& sim) const;
};

class BoundError : public Error {
 public:
  using Error::Error;
};

// ---- Stiffness ------------------------------------------------------------

struct ReleaseOptions {
  double initial_angle = 0.1;  // rad on every tail hinge
  double duration = 4.0;       // s
};

// Head clamped, out of water, tendons detached: the tail is bent and let go.
MarkerTrajectory SimulateRelease(const SwimmerConfig& config, const ReleaseOptions& options = {});

// Dominant frequency of the mean lateral spine-marker displacement.
double ReleaseFrequency(const MarkerTrajectory& traj);

struct StiffnessFit {
  double stiffness = 0.0;  // N m / rad
  double frequency = 0.0;  // Hz, of the re-simulated release
  int evaluations = 0;
};

struct StiffnessOptions {
  double k_min = 1e-3;
  double k_max = 1e3;
  double tolerance = 0.01;  // Hz
  ReleaseOptions release;
};

// Bisection on log k (frequency grows like sqrt(k)). Throws BoundError when
// the target is not bracketed by [k_min, k_max].
StiffnessFit fit_stiffness(double target_freq, const SwimmerConfig& config,
                           const StiffnessOptions& options = {});

// Joint damping matching a measured release track (stiffness fixed).
FitResult fit_damping(const MarkerTrajectory& ref, const SwimmerConfig& config,
                      const ReleaseOptions& release = {}, int max_evals = 60);

// ---- Motor ----------------------------------------------------------------

struct MotorFitOptions {
  Bounds bounds{{0.03, 2.0 * kPi * 0.4, 0.0}, {0.05, 2.0 * kPi * 1.4, 2.0 * kPi}};
  std::array<int, 3> grid{9, 21, 16};  // samples per parameter
  int refine_evals = 200;
  double warmup = 0.0;
  LocalFrameMode mode = LocalFrameMode::kAdvanceNewHeading;
};

// Out-of-water track for crank arm c_m, motor rate omega and phase phi.
MarkerTrajectory SimulateOutOfWater(const SwimmerConfig& config, double crank_arm, double omega,
                                    double phase, double duration, double sample_rate);

// Grid scan over (c_m, omega, phi) followed by a Nelder-Mead refinement from
// the best grid point. best = {c_m, omega, phi}.
FitResult fit_motor(const MarkerTrajectory& ref, const SwimmerConfig& config,
                    const MotorFitOptions& options = {});

// ---- Fluid coefficients ---------------------------------------------------

struct FluidReference {
  MarkerTrajectory markers;
  double motor_rate = 0.0;  // rad/s, identified beforehand
};

struct FluidFitOptions {
  int global_evals = 200;
  int local_evals = 300;
  // The simplex is rebuilt around the incumbent after this many evaluations.
  int local_restart_evals = 300;
  double warmup = 1.0;
  uint64_t seed = 0;
  LocalFrameMode mode = LocalFrameMode::kAdvanceNewHeading;
};

// In-water track with the given coefficients, motor rate and phase.
MarkerTrajectory SimulateInWater(const SwimmerConfig& config, double omega, double phase,
                                 double duration, double sample_rate);

// Mean marker error over the references for x = {5 coefficients, one phase
// per reference}. Divergence scores +infinity.
double FluidObjective(const std::vector<FluidReference>& refs, const SwimmerConfig& config,
                      const std::vector<double>& x, const FluidFitOptions& options = {});

Bounds FluidBounds(size_t num_refs);

// Global search then Nelder-Mead from the incumbent.
FitResult fit_fluid_coeffs(const std::vector<FluidReference>& refs, const SwimmerConfig& config,
                           const FluidFitOptions& options = {});

// Copies the five fitted coefficients into a config.
SwimmerConfig WithFluidCoeffs(const SwimmerConfig& config, const std::vector<double>& x);

}  // namespace fishsim

#endif  // FISHSIM_SYSID_H_
