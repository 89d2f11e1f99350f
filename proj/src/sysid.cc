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

#include "fishsim/sysid.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fishsim/spectrum.h"

namespace fishsim {

MarkerMask AllMarkers() {
  MarkerMask m;
  m.fill(true);
  return m;
}

MarkerMask TailMarkers() {
  MarkerMask m;
  for (int i = 0; i < kMarkerCount; ++i) m[i] = i >= kHeadMarkers;
  return m;
}

double marker_error(const LocalFrameTrajectory& sim, const LocalFrameTrajectory& ref, const MarkerMask& mask) {
  const auto& a = sim.markers.frames;
  const auto& b = ref.markers.frames;
  if (a.size() != b.size()) {
    throw Error("marker_error: frame count mismatch (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw Error("marker_error: no frames");
  double sum = 0.0;
  long count = 0;
  for (size_t t = 0; t < a.size(); ++t) {
    if (a[t].markers.size() != kMarkerCount || b[t].markers.size() != kMarkerCount) {
      throw Error("marker_error: expected 11 markers per frame");
    }
    for (int i = 0; i < kMarkerCount; ++i) {
      if (!mask[i]) continue;
      sum += (a[t].markers[i] - b[t].markers[i]).norm();
      ++count;
    }
  }
  if (count == 0) throw Error("marker_error: empty marker mask");
  return sum / count;
}

LocalFrameTrajectory PrepareTrajectory(const MarkerTrajectory& traj, double warmup, LocalFrameMode mode) {
  return to_local_frame(TrimWarmup(traj, warmup), mode);
}

Objective Objective::FromReference(const MarkerTrajectory& ref, double warmup, LocalFrameMode mode,
                                   const MarkerMask& mask) {
  if (!(warmup < ref.duration())) throw Error("objective warmup must be shorter than the reference");
  Objective o;
  o.warmup = warmup;
  o.mode = mode;
  o.mask = mask;
  o.reference = PrepareTrajectory(ref, warmup, mode);
  return o;
}

double Objective::Evaluate(const MarkerTrajectory& sim) const {
  return marker_error(PrepareTrajectory(sim, warmup, mode), reference, mask);
}

// ---- Stiffness ------------------------------------------------------------

MarkerTrajectory SimulateRelease(const SwimmerConfig& config, const ReleaseOptions& options) {
  SimulateOptions sim;
  sim.swimmer = {Medium::kAir, true, false};
  sim.initial_joints.assign(config.geometry.segment_count + 1, options.initial_angle);
  return simulate(config, ConstantRateController(0.0), options.duration, sim).markers;
}

double ReleaseFrequency(const MarkerTrajectory& traj) {
  const LocalFrameTrajectory local = to_local_frame(traj, LocalFrameMode::kPerFrame);
  std::vector<double> y;
  y.reserve(local.size());
  for (const MarkerFrame& f : local.markers.frames) {
    double s = 0.0;
    for (int i = kHeadMarkers; i < kHeadMarkers + kSpineMarkers; ++i) s += f.markers[i].y();
    y.push_back(s / kSpineMarkers);
  }
  return dominant_frequency(y, 1.0 / traj.sample_rate);
}

StiffnessFit fit_stiffness(double target_freq, const SwimmerConfig& config, const StiffnessOptions& options) {
  if (!(target_freq > 0.0)) throw Error("fit_stiffness: target frequency must be positive");
  StiffnessFit fit;
  SwimmerConfig c = config;
  auto freq_at = [&](double k) {
    c.joints.stiffness = k;
    ++fit.evaluations;
    return ReleaseFrequency(SimulateRelease(c, options.release));
  };
  double lo = options.k_min, hi = options.k_max;
  const double f_lo = freq_at(lo);
  const double f_hi = freq_at(hi);
  if (!(f_lo <= target_freq && target_freq <= f_hi)) {
    throw BoundError("fit_stiffness: " + std::to_string(target_freq) + " Hz outside the reachable range [" +
                     std::to_string(f_lo) + ", " + std::to_string(f_hi) + "] Hz");
  }
  // First guess from the square-root law, then bisection in log k.
  double k = lo * std::pow(target_freq / f_lo, 2.0);
  k = std::clamp(k, lo, hi);
  double f = freq_at(k);
  for (int it = 0; it < 60 && std::abs(f - target_freq) > options.tolerance; ++it) {
    if (f < target_freq) {
      lo = k;
    } else {
      hi = k;
    }
    k = std::sqrt(lo * hi);
    f = freq_at(k);
  }
  fit.stiffness = k;
  fit.frequency = f;
  return fit;
}

FitResult fit_damping(const MarkerTrajectory& ref, const SwimmerConfig& config, const ReleaseOptions& release,
                      int max_evals) {
  const Objective objective = Objective::FromReference(ref, 0.0, LocalFrameMode::kPerFrame, TailMarkers());
  ReleaseOptions r = release;
  r.duration = ref.duration();
  auto f = [&](const std::vector<double>& x) {
    SwimmerConfig c = config;
    c.joints.damping = std::pow(10.0, x[0]);
    SimulateOptions sim;
    sim.swimmer = {Medium::kAir, true, false};
    sim.initial_joints.assign(c.geometry.segment_count + 1, r.initial_angle);
    sim.sample_rate = ref.sample_rate;
    return objective.Evaluate(simulate(c, ConstantRateController(0.0), r.duration, sim).markers);
  };
  const Bounds bounds{{-6.0}, {0.0}};
  NelderMeadOptions nm;
  nm.max_evals = max_evals;
  nm.tolerance = 1e-4;
  FitResult result = nelder_mead(f, {std::log10(std::max(config.joints.damping, 1e-6))}, nm, &bounds);
  for (double& v : result.best) v = std::pow(10.0, v);
  return result;
}

// ---- Motor ----------------------------------------------------------------

MarkerTrajectory SimulateOutOfWater(const SwimmerConfig& config, double crank_arm, double omega, double phase,
                                    double duration, double sample_rate) {
  SwimmerConfig c = config;
  c.motor.crank_arm = crank_arm;
  SimulateOptions sim;
  sim.swimmer = {Medium::kAir, true, true};
  sim.motor_phase = phase;
  sim.sample_rate = sample_rate;
  return simulate(c, ConstantRateController(omega), duration, sim).markers;
}

FitResult fit_motor(const MarkerTrajectory& ref, const SwimmerConfig& config, const MotorFitOptions& options) {
  options.bounds.Validate();
  if (options.bounds.size() != 3) throw Error("fit_motor: bounds must cover (c_m, omega, phi)");
  const Objective objective = Objective::FromReference(ref, options.warmup, options.mode);
  auto f = [&](const std::vector<double>& x) {
    try {
      return objective.Evaluate(SimulateOutOfWater(config, x[0], x[1], x[2], ref.duration(), ref.sample_rate));
    } catch (const DivergenceError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  FitResult result;
  const Bounds& b = options.bounds;
  auto grid_value = [&](int dim, int i) {
    const int n = options.grid[dim];
    if (n <= 1) return 0.5 * (b.lower[dim] + b.upper[dim]);
    // The phase is periodic: do not sample both 0 and 2 pi.
    const bool periodic = dim == 2 && std::abs(b.upper[2] - b.lower[2] - 2.0 * kPi) < 1e-9;
    const double span = b.upper[dim] - b.lower[dim];
    return b.lower[dim] + span * i / (periodic ? n : n - 1);
  };
  for (int i = 0; i < options.grid[0]; ++i) {
    for (int j = 0; j < options.grid[1]; ++j) {
      for (int k = 0; k < options.grid[2]; ++k) {
        const std::vector<double> x{grid_value(0, i), grid_value(1, j), grid_value(2, k)};
        result.Record(x, SanitizeObjective(f(x)));
      }
    }
  }
  if (options.refine_evals > 0) {
    NelderMeadOptions nm;
    nm.max_evals = options.refine_evals;
    nm.initial_step = 0.05;
    nm.tolerance = 1e-7;
    result.Append(nelder_mead(f, result.best, nm, &options.bounds));
  }
  return result;
}

// ---- Fluid coefficients ---------------------------------------------------

MarkerTrajectory SimulateInWater(const SwimmerConfig& config, double omega, double phase, double duration,
                                 double sample_rate) {
  SimulateOptions sim;
  sim.motor_phase = phase;
  sim.sample_rate = sample_rate;
  return simulate(config, ConstantRateController(omega), duration, sim).markers;
}

SwimmerConfig WithFluidCoeffs(const SwimmerConfig& config, const std::vector<double>& x) {
  if (x.size() < 5) throw Error("fluid parameter vector needs 5 coefficients");
  SwimmerConfig c = config;
  c.fluid.SetFromArray({x[0], x[1], x[2], x[3], x[4]});
  return c;
}

Bounds FluidBounds(size_t num_refs) {
  Bounds b;
  b.lower.assign(5, FluidCoeffs::kLowerBound);
  b.upper.assign(5, FluidCoeffs::kUpperBound);
  for (size_t i = 0; i < num_refs; ++i) {
    b.lower.push_back(0.0);
    b.upper.push_back(2.0 * kPi);
  }
  return b;
}

namespace {

std::vector<Objective> FluidObjectives(const std::vector<FluidReference>& refs, const FluidFitOptions& options) {
  std::vector<Objective> out;
  for (const FluidReference& r : refs) out.push_back(Objective::FromReference(r.markers, options.warmup, options.mode));
  return out;
}

double EvaluateFluid(const std::vector<FluidReference>& refs, const std::vector<Objective>& objectives,
                     const SwimmerConfig& config, const std::vector<double>& x) {
  if (x.size() != 5 + refs.size()) throw Error("fluid parameter vector has the wrong size");
  const SwimmerConfig c = WithFluidCoeffs(config, x);
  double sum = 0.0;
  try {
    for (size_t i = 0; i < refs.size(); ++i) {
      const MarkerTrajectory& ref = refs[i].markers;
      sum += objectives[i].Evaluate(
          SimulateInWater(c, refs[i].motor_rate, x[5 + i], ref.duration(), ref.sample_rate));
    }
  } catch (const DivergenceError&) {
    return std::numeric_limits<double>::infinity();
  }
  return sum / refs.size();
}

}  // namespace

double FluidObjective(const std::vector<FluidReference>& refs, const SwimmerConfig& config,
                      const std::vector<double>& x, const FluidFitOptions& options) {
  return EvaluateFluid(refs, FluidObjectives(refs, options), config, x);
}

FitResult fit_fluid_coeffs(const std::vector<FluidReference>& refs, const SwimmerConfig& config,
                           const FluidFitOptions& options) {
  if (refs.empty()) throw Error("fit_fluid_coeffs: at least one reference required");
  const std::vector<Objective> objectives = FluidObjectives(refs, options);
  auto f = [&](const std::vector<double>& x) { return EvaluateFluid(refs, objectives, config, x); };
  const Bounds bounds = FluidBounds(refs.size());

  GlobalSearchOptions gs;
  gs.seed = options.seed;
  const int n_init = InitialDesignSize(gs, bounds.size());
  FitResult result = global_search(f, bounds, std::max(0, options.global_evals - n_init), gs);
  // In 7 dimensions a single simplex tends to flatten long before the
  // budget runs out; restart it from the incumbent.
  const int chunk = std::max(1, options.local_restart_evals);
  for (int used = 0; used < options.local_evals;) {
    NelderMeadOptions nm;
    nm.max_evals = std::min(chunk, options.local_evals - used);
    nm.initial_step = 0.05;
    nm.tolerance = 1e-6;
    const FitResult local = nelder_mead(f, result.best, nm, &bounds);
    used += local.evaluations;
    result.Append(local);
    if (local.evaluations == 0) break;
  }
  return result;
}

}  // namespace fishsim
