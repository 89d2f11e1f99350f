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

#include "fishsim/hydro.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace fishsim {

Vec3 LambShapeFactors(const Vec3& s) {
  const double a2 = s.x() * s.x(), b2 = s.y() * s.y(), c2 = s.z() * s.z();
  const double abc = s.x() * s.y() * s.z();
  const std::array<double, 3> sq = {a2, b2, c2};
  boost::math::quadrature::exp_sinh<double> integrator;
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    auto f = [&](double l) {
      const double delta = std::sqrt((a2 + l) * (b2 + l) * (c2 + l));
      return 1.0 / ((sq[i] + l) * delta);
    };
    out[i] = abc * integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
  }
  return out;
}

Vec3 EllipsoidAddedMass(const Vec3& semi_axes, double fluid_density) {
  if (fluid_density == 0.0) return Vec3::Zero();
  const double displaced = fluid_density * 4.0 / 3.0 * kPi * semi_axes.prod();
  const Vec3 alpha = LambShapeFactors(semi_axes);
  Vec3 m;
  for (int i = 0; i < 3; ++i) m[i] = displaced * alpha[i] / (2.0 - alpha[i]);
  return m;
}

Vec3 EllipsoidAddedInertia(const Vec3& semi_axes, double fluid_density) {
  if (fluid_density == 0.0) return Vec3::Zero();
  const double displaced = fluid_density * 4.0 / 3.0 * kPi * semi_axes.prod();
  const Vec3 alpha = LambShapeFactors(semi_axes);
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const double bj2 = semi_axes[j] * semi_axes[j];
    const double bk2 = semi_axes[k] * semi_axes[k];
    const double diff = bj2 - bk2;
    // Rotation of a body of revolution about its symmetry axis moves no fluid.
    if (std::abs(diff) <= 1e-9 * (bj2 + bk2)) {
      out[i] = 0.0;
      continue;
    }
    const double num = diff * diff * (alpha[k] - alpha[j]);
    const double den = 2.0 * diff + (bj2 + bk2) * (alpha[j] - alpha[k]);
    out[i] = std::max(0.0, displaced / 5.0 * num / den);
  }
  return out;
}

EllipsoidGeom MakeEllipsoid(const Vec3& semi_axes, double body_density, double fluid_density) {
  if ((semi_axes.array() <= 0.0).any()) {
    throw Error("ellipsoid semi-axes must be positive");
  }
  const double a = semi_axes.x(), b = semi_axes.y(), c = semi_axes.z();
  EllipsoidGeom g;
  g.semi_axes = semi_axes;
  g.volume = 4.0 / 3.0 * kPi * a * b * c;
  g.mass = body_density * g.volume;
  g.inertia = Vec3(b * b + c * c, a * a + c * c, a * a + b * b) * (g.mass / 5.0);
  const double k = 8.0 * kPi / 15.0;
  g.drag_moment = Vec3(a * (std::pow(b, 4) + std::pow(c, 4)), b * (std::pow(a, 4) + std::pow(c, 4)),
                       c * (std::pow(a, 4) + std::pow(b, 4))) *
                  k;
  g.drag_moment_max = Vec3::Constant(g.drag_moment.maxCoeff());
  g.mean_radius = (a + b + c) / 3.0;
  g.max_area = kPi * std::max({b * c, a * c, a * b});
  semi_axes.maxCoeff(&g.long_axis);
  g.added_mass = EllipsoidAddedMass(semi_axes, fluid_density);
  g.added_inertia = EllipsoidAddedInertia(semi_axes, fluid_density);
  return g;
}

void FluidCoeffs::SetFromArray(const std::array<double, 5>& c) {
  blunt = c[0];
  slender = c[1];
  angular = c[2];
  kutta = c[3];
  magnus = c[4];
}

void FluidCoeffs::Validate() const {
  static const char* kNames[] = {"blunt", "slender", "angular", "kutta", "magnus"};
  const auto c = AsArray();
  for (int i = 0; i < 5; ++i) {
    if (!(c[i] >= kLowerBound && c[i] <= kUpperBound)) {
      throw Error(std::string("fluid coefficient ") + kNames[i] + " outside [0, 10]");
    }
  }
  if (!(density > 0.0) || !(viscosity > 0.0)) {
    throw Error("fluid density and viscosity must be positive");
  }
}

double projected_area(const EllipsoidGeom& geom, const Vec3& n) {
  const double len = n.norm();
  if (!(len > 0.0)) throw Error("projected_area: zero-length direction");
  const Vec3 u = n / len;
  const Vec3& s = geom.semi_axes;
  const Vec3 w(s.y() * s.z() * u.x(), s.x() * s.z() * u.y(), s.x() * s.y() * u.z());
  return kPi * w.norm();
}

Wrench drag_wrench(const BodyState& state, const EllipsoidGeom& geom, const FluidCoeffs& coeffs) {
  Wrench w = Wrench::Zero(Frame::kBody);
  const Vec3 v = state.BodyLinearVelocity();
  const double speed = v.norm();
  if (speed > 0.0) {
    const double area_v = projected_area(geom, v);
    const double area =
        coeffs.blunt * area_v + coeffs.slender * (geom.max_area - area_v);
    w.force = -coeffs.density * area * speed * v;
  }
  const Vec3& omega = state.ang_vel;
  const Vec3 moment =
      coeffs.angular * geom.drag_moment + coeffs.slender * (geom.drag_moment_max - geom.drag_moment);
  w.torque = -coeffs.density * (moment.array() * omega.array().abs() * omega.array()).matrix();
  return w;
}

Wrench viscous_wrench(const BodyState& state, const EllipsoidGeom& geom,
                      const FluidCoeffs& coeffs) {
  const double r = geom.mean_radius;
  Wrench w = Wrench::Zero(Frame::kBody);
  w.force = -6.0 * kPi * coeffs.viscosity * r * state.BodyLinearVelocity();
  w.torque = -8.0 * kPi * coeffs.viscosity * r * r * r * state.ang_vel;
  return w;
}

Vec3 kutta_lift(const BodyState& state, const EllipsoidGeom& geom, const FluidCoeffs& coeffs) {
  const Vec3 v = state.BodyLinearVelocity();
  const double speed = v.norm();
  if (speed < kKuttaMinSpeed) return Vec3::Zero();
  Vec3 v_par = Vec3::Zero();
  v_par[geom.long_axis] = v[geom.long_axis];
  const double area_v = projected_area(geom, v);
  return coeffs.density * coeffs.kutta * area_v / speed * v.cross(v_par).cross(v);
}

Vec3 magnus_lift(const BodyState& state, const EllipsoidGeom& geom, const FluidCoeffs& coeffs) {
  const Vec3 v = state.BodyLinearVelocity();
  return coeffs.density * coeffs.magnus * geom.volume * state.ang_vel.cross(v);
}

Wrench added_mass_wrench(const BodyState& state, const BodyAccel& accel,
                         const EllipsoidGeom& geom) {
  const Vec3 v = state.BodyLinearVelocity();
  const Vec3& omega = state.ang_vel;
  const Vec3 momentum = geom.added_mass.cwiseProduct(v);
  const Vec3 ang_momentum = geom.added_inertia.cwiseProduct(omega);
  Wrench w = Wrench::Zero(Frame::kBody);
  w.force = -geom.added_mass.cwiseProduct(accel.lin) + momentum.cross(omega);
  w.torque = -geom.added_inertia.cwiseProduct(accel.ang) + momentum.cross(v) +
             ang_momentum.cross(omega);
  return w;
}

Wrench total_fluid_wrench(const BodyState& state, const BodyAccel& accel,
                          const EllipsoidGeom& geom, const FluidCoeffs& coeffs) {
  Wrench w = drag_wrench(state, geom, coeffs);
  w += viscous_wrench(state, geom, coeffs);
  w.force += kutta_lift(state, geom, coeffs) + magnus_lift(state, geom, coeffs);
  w += added_mass_wrench(state, accel, geom);
  return w.ToWorld(state.orient);
}

BodyAccel VelocityOnlyAccel(const BodyState& state) {
  return BodyAccel{-state.ang_vel.cross(state.BodyLinearVelocity()), Vec3::Zero()};
}

}  // namespace fishsim
