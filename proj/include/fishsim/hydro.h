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

// Stateless fluid forces on ellipsoidal bodies.
//
// Every term is a function of the body's own kinematic state only: there is
// no fluid field, no wake and no interaction between bodies. The component
// functions return body-frame quantities; total_fluid_wrench() sums them and
// reports the result in the world frame.

#ifndef FISHSIM_HYDRO_H_
#define FISHSIM_HYDRO_H_

#include <array>

#include "fishsim/core.h"

namespace fishsim {

// Geometry and mass properties of one fluid-interacting body. All vectors
// are along the body's principal (semi-)axes.
struct EllipsoidGeom {
  Vec3 semi_axes = Vec3::Ones();
  double volume = 0.0;          // m^3
  double mass = 0.0;            // kg
  Vec3 inertia = Vec3::Zero();  // kg m^2, solid body of uniform density

  // Geometric second moments used by the angular drag term (m^5), and the
  // vector whose entries all equal their maximum.
  Vec3 drag_moment = Vec3::Zero();
  Vec3 drag_moment_max = Vec3::Zero();

  double mean_radius = 0.0;  // average of the semi-axes, m
  double max_area = 0.0;     // largest principal projected area, m^2
  int long_axis = 0;         // index of the longest semi-axis

  // Diagonal potential-flow added mass (kg) and added inertia (kg m^2).
  Vec3 added_mass = Vec3::Zero();
  Vec3 added_inertia = Vec3::Zero();
};

// Builds the geometry for semi-axes (a, b, c). The added-mass tensors scale
// with fluid_density; pass 0 for a body in air.
EllipsoidGeom MakeEllipsoid(const Vec3& semi_axes, double body_density,
                            double fluid_density);

// Lamb's shape integrals alpha_i = abc * int_0^inf dl / ((a_i^2 + l) D(l)),
// D(l) = sqrt((a^2+l)(b^2+l)(c^2+l)), evaluated by adaptive quadrature.
Vec3 LambShapeFactors(const Vec3& semi_axes);

// Added mass (kg) and added inertia (kg m^2) of an ellipsoid in a fluid.
Vec3 EllipsoidAddedMass(const Vec3& semi_axes, double fluid_density);
Vec3 EllipsoidAddedInertia(const Vec3& semi_axes, double fluid_density);

struct FluidCoeffs {
  double blunt = 0.0;
  double slender = 0.0;
  double angular = 0.0;
  double kutta = 0.0;
  double magnus = 0.0;
  double density = 1000.0;   // kg/m^3
  double viscosity = 1e-3;   // Pa s

  static constexpr double kLowerBound = 0.0;
  static constexpr double kUpperBound = 10.0;

  std::array<double, 5> AsArray() const { return {blunt, slender, angular, kutta, magnus}; }
  void SetFromArray(const std::array<double, 5>& c);
  // Throws Error on out-of-bound coefficients or non-positive fluid constants.
  void Validate() const;
};

// Body-frame accelerations: time derivatives of the body-frame linear and
// angular velocity components.
struct BodyAccel {
  Vec3 lin = Vec3::Zero();
  Vec3 ang = Vec3::Zero();
};

// Area of the ellipsoid's silhouette seen along the body-frame direction n.
double projected_area(const EllipsoidGeom& geom, const Vec3& n);

// Blunt/slender drag and angular drag.
Wrench drag_wrench(const BodyState& state, const EllipsoidGeom& geom, const FluidCoeffs& coeffs);
Wrench viscous_wrench(const BodyState& state, const EllipsoidGeom& geom,
                      const FluidCoeffs& coeffs);

// Speeds below this return zero Kutta lift.
inline constexpr double kKuttaMinSpeed = 1e-6;
Vec3 kutta_lift(const BodyState& state, const EllipsoidGeom& geom, const FluidCoeffs& coeffs);
Vec3 magnus_lift(const BodyState& state, const EllipsoidGeom& geom, const FluidCoeffs& coeffs);

Wrench added_mass_wrench(const BodyState& state, const BodyAccel& accel,
                         const EllipsoidGeom& geom);

// Sum of all six terms, in the world frame.
Wrench total_fluid_wrench(const BodyState& state, const BodyAccel& accel,
                          const EllipsoidGeom& geom, const FluidCoeffs& coeffs);

// The part of the body-frame acceleration that does not depend on the world
// acceleration: d/dt(R^T v) = R^T a - w x v_body. The dynamics keeps the
// R^T a part on the mass side, so the swimmer evaluates the fluid wrench with
// this value.
BodyAccel VelocityOnlyAccel(const BodyState& state);

}  // namespace fishsim

#endif  // FISHSIM_HYDRO_H_
