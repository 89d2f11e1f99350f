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

// Full parameterization of the swimmer, stored as a JSON document.

#ifndef FISHSIM_CONFIG_H_
#define FISHSIM_CONFIG_H_

#include <string>

#include "fishsim/core.h"
#include "fishsim/hydro.h"

namespace fishsim {

class SchemaError : public Error {
 public:
  using Error::Error;
};

struct SwimmerConfig {
  struct Geometry {
    // Overall length, height and width of the robot, m.
    Vec3 bulk_dims{0.57, 0.25, 0.17};
    // Semi-axes along (forward, left, up), m.
    Vec3 head_semi_axes{0.08, 0.085, 0.10};
    int segment_count = 5;
    Vec3 segment_semi_axes{0.025, 0.025, 0.03};
    Vec3 fin_semi_axes{0.05, 0.004, 0.04};
  } geometry;

  double total_mass = 2.5;  // kg, spread at uniform density

  struct Joints {
    double stiffness = 7.987;  // N m / rad, every tail hinge (3.5 Hz release)
    double damping = 0.002;   // N m s / rad
    double limit_deg = 60.0;
  } joints;

  struct Tendon {
    double stiffness = 9000.0;    // N/m, about 3% peak stretch
    double lateral_offset = 0.02; // m, via-point distance from the spine
    double head_via_x = -0.06;    // m, tendon exit point on the head (head frame)
    int crossover_index = 3;      // vias on tail bodies >= this index switch side
  } tendon;

  struct Motor {
    double crank_arm = 0.0395;           // m
    double rod_length = 0.0;             // m, 0 = first-order crank model
    double max_rate = 2.0 * kPi * 5.0;   // rad/s
  } motor;

  FluidCoeffs fluid{0.40, 7.79, 2.81, 3.84, 0.27, 1000.0, 1e-3};

  double dt = 1e-3;  // s

  struct Surface {
    double z0 = 0.0;
    double frequency_hz = 5.0;  // natural frequency of each body's vertical spring
    double damping_ratio = 1.0;
  } surface;

  double sample_rate = 60.0;  // Hz, marker output

  // Throws SchemaError naming the offending field.
  void Validate() const;
};

std::string ConfigToJson(const SwimmerConfig& config);
// Parses and validates. Unknown keys are rejected.
SwimmerConfig ConfigFromJson(const std::string& text);
SwimmerConfig LoadConfig(const std::string& path);
void SaveConfig(const SwimmerConfig& config, const std::string& path);

// Stable hash of the canonical JSON form (FNV-1a, hex).
std::string ConfigHash(const SwimmerConfig& config);

}  // namespace fishsim

#endif  // FISHSIM_CONFIG_H_
