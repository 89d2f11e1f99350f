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

#include "fishsim/ebt.h"

#include <cmath>

#include <boost/math/special_functions/ellint_rg.hpp>

namespace fishsim {

double EllipsoidSurface(const Vec3& s) {
  const double a = s.x(), b = s.y(), c = s.z();
  return 4.0 * kPi * a * b * c * boost::math::ellint_rg(1.0 / (a * a), 1.0 / (b * b), 1.0 / (c * c));
}

void EbtParams::Validate() const {
  if (!(beta >= kBetaMin && beta <= kBetaMax)) throw Error("ebt: beta outside [0.9, 1.1]");
  if (!(drag_coeff >= kDragMin && drag_coeff <= kDragMax)) throw Error("ebt: c_D outside [0, 10]");
  if (!(density > 0.0)) throw Error("ebt: density must be positive");
  if (!(surface_area > 0.0)) throw Error("ebt: surface area must be positive");
  if (!(depth > 0.0)) throw Error("ebt: depth must be positive");
}

double EbtParams::AddedMassPerLength() const { return 0.25 * density * kPi * beta * depth * depth; }

EbtParams EbtParamsFromConfig(const SwimmerConfig& config) {
  const auto& g = config.geometry;
  EbtParams p;
  p.density = config.fluid.density;
  p.surface_area = EllipsoidSurface(g.head_semi_axes) + g.segment_count * EllipsoidSurface(g.segment_semi_axes) +
                   EllipsoidSurface(g.fin_semi_axes);
  p.depth = 2.0 * g.fin_semi_axes.z();
  return p;
}

TailKinematics TailKinematicsFromTrajectory(const MarkerTrajectory& traj, double warmup) {
  const LocalFrameTrajectory local = to_local_frame(TrimWarmup(traj, warmup), LocalFrameMode::kPerFrame);
  TailKinematics k;
  k.dt = 1.0 / traj.sample_rate;
  const int tip = kMarkerCount - 1, prev = kMarkerCount - 2;
  double spacing = 0.0;
  for (const MarkerFrame& f : local.markers.frames) {
    k.h_tip.push_back(f.markers[tip].y());
    k.h_prev.push_back(f.markers[prev].y());
    spacing += std::abs(f.markers[prev].x() - f.markers[tip].x());
  }
  k.dx = local.size() > 0 ? spacing / local.size() : 0.0;
  return k;
}

TailDerivatives tail_derivatives(const TailKinematics& k) {
  const size_t n = k.h_tip.size();
  if (n < 3) throw Error("tail_derivatives: at least 3 frames required");
  if (k.h_prev.size() != n) throw Error("tail_derivatives: marker series differ in length");
  if (!(k.dt > 0.0) || !(k.dx > 0.0)) throw Error("tail_derivatives: dt and dx must be positive");
  TailDerivatives d;
  for (size_t i = 1; i + 1 < n; ++i) {
    const double ht = (k.h_tip[i + 1] - k.h_tip[i - 1]) / (2.0 * k.dt);
    d.dhdt_sq += ht * ht;
  }
  d.dhdt_sq /= n - 2;
  for (size_t i = 0; i < n; ++i) {
    const double hx = (k.h_tip[i] - k.h_prev[i]) / k.dx;
    d.dhdx_sq += hx * hx;
  }
  d.dhdx_sq /= n;
  return d;
}

double EbtThrust(const TailDerivatives& d, const EbtParams& p, double speed) {
  return p.AddedMassPerLength() * (d.dhdt_sq - speed * speed * d.dhdx_sq);
}

double EbtDrag(const EbtParams& p, double speed) {
  return 0.5 * p.density * p.drag_coeff * p.surface_area * speed * speed;
}

double cruise_speed(const TailDerivatives& d, const EbtParams& p) {
  const double m = p.AddedMassPerLength();
  const double num = m * d.dhdt_sq;
  if (num <= 0.0) return 0.0;
  const double den = m * d.dhdx_sq + 0.5 * p.density * p.drag_coeff * p.surface_area;
  if (!(den > 0.0)) throw Error("cruise_speed: still tail slope with zero drag has no balance");
  return std::sqrt(num / den);
}

EbtFit fit_ebt(const std::vector<EbtSample>& samples, const EbtParams& base, const EbtFitOptions& options) {
  if (samples.empty()) throw Error("fit_ebt: at least one sample required");
  auto params_at = [&](const std::vector<double>& x) {
    EbtParams p = base;
    p.beta = x[0];
    p.drag_coeff = x[1];
    return p;
  };
  auto f = [&](const std::vector<double>& x) {
    const EbtParams p = params_at(x);
    double err = 0.0;
    for (const EbtSample& s : samples) err += std::abs(cruise_speed(s.derivatives, p) - s.measured_speed);
    return err / samples.size();
  };
  const Bounds bounds{{EbtParams::kBetaMin, EbtParams::kDragMin}, {EbtParams::kBetaMax, EbtParams::kDragMax}};
  GlobalSearchOptions gs;
  gs.seed = options.seed;
  const int n_init = InitialDesignSize(gs, 2);
  EbtFit out;
  out.fit = global_search(f, bounds, std::max(0, options.global_evals - n_init), gs);
  if (options.local_evals > 0) {
    NelderMeadOptions nm;
    nm.max_evals = options.local_evals;
    nm.tolerance = 1e-10;
    nm.initial_step = 0.02;
    out.fit.Append(nelder_mead(f, out.fit.best, nm, &bounds));
  }
  out.params = params_at(out.fit.best);
  out.mean_abs_error = out.fit.best_value;
  return out;
}

}  // namespace fishsim
