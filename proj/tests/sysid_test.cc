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
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fishsim/optimize.h"
#include "fishsim/spectrum.h"
#include "fishsim/sysid.h"

namespace fishsim {
namespace {

MarkerTrajectory Synthetic(int frames, double rate) {
  MarkerTrajectory t;
  t.sample_rate = rate;
  for (int f = 0; f < frames; ++f) {
    MarkerFrame fr;
    fr.time = f / rate;
    fr.markers = {Point2(0, 0), Point2(0.1, 0), Point2(0.05, 0.03), Point2(0.05, -0.03), Point2(0.12, 0)};
    for (int k = 0; k < 5; ++k) fr.markers.emplace_back(-0.05 * (k + 1), 0.01 * (k + 1) * std::sin(fr.time - k));
    fr.markers.emplace_back(-0.3, 0.06 * std::sin(fr.time - 5));
    t.frames.push_back(fr);
  }
  return t;
}

LocalFrameTrajectory Local(const MarkerTrajectory& t) { return to_local_frame(t, LocalFrameMode::kPerFrame); }

std::vector<double> Sine(double freq, double rate, double seconds, double decay = 0.0) {
  std::vector<double> y;
  for (int i = 0; i < static_cast<int>(rate * seconds); ++i) {
    const double t = i / rate;
    y.push_back(std::exp(-decay * t) * std::sin(2 * kPi * freq * t + 0.3));
  }
  return y;
}

// ---- marker error ----

TEST(MarkerErrorTest, IdenticalIsZero) {
  const auto a = Local(Synthetic(30, 60));
  EXPECT_DOUBLE_EQ(marker_error(a, a), 0.0);
}

TEST(MarkerErrorTest, UniformShiftGivesShift) {
  const auto a = Local(Synthetic(30, 60));
  auto b = a;
  for (auto& f : b.markers.frames) {
    for (auto& p : f.markers) p += Point2(0.006, 0.008);
  }
  EXPECT_NEAR(marker_error(a, b), 0.01, 1e-12);
}

TEST(MarkerErrorTest, SymmetricAndTriangle) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 0.01);
  const auto a = Local(Synthetic(20, 60));
  auto b = a, c = a;
  for (auto* t : {&b, &c}) {
    for (auto& f : t->markers.frames) {
      for (auto& p : f.markers) p += Point2(n(rng), n(rng));
    }
  }
  EXPECT_DOUBLE_EQ(marker_error(a, b), marker_error(b, a));
  EXPECT_LE(marker_error(a, c), marker_error(a, b) + marker_error(b, c) + 1e-15);
  EXPECT_GT(marker_error(a, b), 0.0);
}

TEST(MarkerErrorTest, MaskRestrictsMarkers) {
  const auto a = Local(Synthetic(10, 60));
  auto b = a;
  for (auto& f : b.markers.frames) f.markers[0] += Point2(0.05, 0.0);
  EXPECT_DOUBLE_EQ(marker_error(a, b, TailMarkers()), 0.0);
  EXPECT_NEAR(marker_error(a, b), 0.05 / kMarkerCount, 1e-12);
}

TEST(MarkerErrorTest, FrameCountMismatchThrows) {
  EXPECT_THROW(marker_error(Local(Synthetic(10, 60)), Local(Synthetic(11, 60))), Error);
}

// ---- spectrum ----

TEST(SpectrumTest, PureSine) {
  const auto y = Sine(3.5, 60, 4);
  EXPECT_NEAR(dominant_frequency(y, 1.0 / 60), 3.5, 0.05);
}

TEST(SpectrumTest, DampedSine) {
  const auto y = Sine(2.0, 60, 4, 0.8);
  EXPECT_NEAR(dominant_frequency(y, 1.0 / 60), 2.0, 0.1);
}

TEST(SpectrumTest, ConstantHasNoPeak) {
  const std::vector<double> y(240, 1.7);
  EXPECT_THROW(dominant_frequency(y, 1.0 / 60), NoPeakError);
}

// ---- stiffness ----

TEST(StiffnessTest, ReleaseAtDefaultIsThreeAndAHalf) {
  EXPECT_NEAR(ReleaseFrequency(SimulateRelease(SwimmerConfig{})), 3.5, 0.05);
}

TEST(StiffnessTest, HitsTarget) {
  SwimmerConfig c;
  c.joints.stiffness = 1.0;
  const StiffnessFit fit = fit_stiffness(3.5, c);
  EXPECT_NEAR(fit.frequency, 3.5, 0.05);
  EXPECT_NEAR(fit.stiffness, SwimmerConfig{}.joints.stiffness, 0.05 * SwimmerConfig{}.joints.stiffness);
}

TEST(StiffnessTest, RoundTrip) {
  SwimmerConfig truth;
  truth.joints.stiffness = 3.0;
  const double f = ReleaseFrequency(SimulateRelease(truth));
  const StiffnessFit fit = fit_stiffness(f, SwimmerConfig{});
  EXPECT_NEAR(fit.stiffness, 3.0, 0.15);
}

// Doubling every inertia at fixed frequency needs twice the stiffness.
TEST(StiffnessTest, MassScaling) {
  SwimmerConfig heavy;
  heavy.total_mass *= 2.0;
  const double k1 = fit_stiffness(3.0, SwimmerConfig{}).stiffness;
  const double k2 = fit_stiffness(3.0, heavy).stiffness;
  EXPECT_NEAR(k2 / k1, 2.0, 0.1);
}

TEST(StiffnessTest, UnreachableTargetThrows) {
  EXPECT_THROW(fit_stiffness(100.0, SwimmerConfig{}), BoundError);
  EXPECT_THROW(fit_stiffness(-1.0, SwimmerConfig{}), Error);
}

// ---- motor ----

TEST(MotorTest, PhaseIsPeriodic) {
  const SwimmerConfig c;
  const auto a = SimulateOutOfWater(c, 0.04, 2 * kPi * 0.6, 0.3, 1.0, 60);
  const auto b = SimulateOutOfWater(c, 0.04, 2 * kPi * 0.6, 0.3 + 2 * kPi, 1.0, 60);
  EXPECT_LT(marker_error(Local(a), Local(b)), 1e-9);
}

TEST(MotorTest, SmallGridRoundTrip) {
  const SwimmerConfig c;
  const auto ref = SimulateOutOfWater(c, 0.0395, 2 * kPi * 0.6, 0.3, 2.0, 60);
  MotorFitOptions o;
  o.grid = {3, 11, 8};
  o.refine_evals = 200;
  const FitResult fit = fit_motor(ref, c, o);
  EXPECT_LT(fit.best_value, 1e-3);
  EXPECT_NEAR(fit.best[1], 2 * kPi * 0.6, 0.02);
}

// ---- optimizers ----

TEST(NelderMeadTest, Sphere) {
  auto f = [](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; };
  const FitResult r = nelder_mead(f, {1.0, -2.0, 0.5});
  EXPECT_LT(r.best_value, 1e-8);
}

TEST(NelderMeadTest, Rosenbrock) {
  auto f = [](const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  NelderMeadOptions o;
  o.max_evals = 500;
  o.tolerance = 1e-10;
  const FitResult r = nelder_mead(f, {-1.2, 1.0}, o);
  EXPECT_LE(r.evaluations, 500);
  EXPECT_NEAR(r.best[0], 1.0, 1e-4);
  EXPECT_NEAR(r.best[1], 1.0, 1e-4);
}

TEST(NelderMeadTest, QuadraticAtDefaultFluidCoefficients) {
  const std::vector<double> c{0.40, 7.79, 2.81, 3.84, 0.27};
  auto f = [&](const std::vector<double>& x) {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += (i + 1) * (x[i] - c[i]) * (x[i] - c[i]);
    return s;
  };
  const Bounds b = FluidBounds(0);
  NelderMeadOptions o;
  o.max_evals = 2000;
  o.tolerance = 1e-9;
  const FitResult r = nelder_mead(f, {1, 1, 1, 1, 1}, o, &b);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(r.best[i], c[i], 1e-3);
}

TEST(NelderMeadTest, StaysInBounds) {
  auto f = [](const std::vector<double>& x) { return x[0] + x[1]; };
  const Bounds b{{0.0, 0.0}, {1.0, 1.0}};
  const FitResult r = nelder_mead(f, {0.5, 0.5}, {}, &b);
  for (const TraceEntry& e : r.trace) EXPECT_TRUE(b.Contains(e.x));
  EXPECT_LT(r.best_value, 1e-3);
}

TEST(NelderMeadTest, NanTreatedAsInfinity) {
  auto f = [](const std::vector<double>& x) {
    return x[0] < 0 ? std::nan("") : (x[0] - 1) * (x[0] - 1);
  };
  const FitResult r = nelder_mead(f, {0.2});
  EXPECT_TRUE(std::isfinite(r.best_value));
  EXPECT_NEAR(r.best[0], 1.0, 1e-3);
}

TEST(GlobalSearchTest, Multimodal) {
  auto f = [](const std::vector<double>& x) { return std::sin(3 * x[0]) + 0.1 * x[0] * x[0]; };
  const Bounds b{{-4.0}, {4.0}};
  const FitResult r = global_search(f, b, 100 - InitialDesignSize({}, 1));
  EXPECT_EQ(r.evaluations, 100);
  // Global minimum near x = -0.5; the oracle is a dense scan.
  double best = 1e9;
  for (int i = 0; i <= 80000; ++i) best = std::min(best, f({-4.0 + 8.0 * i / 80000}));
  EXPECT_LT(r.best_value - best, 1e-2);
}

TEST(GlobalSearchTest, ZeroBudgetIsDesignOnly) {
  auto f = [](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1]; };
  const Bounds b{{-1.0, -1.0}, {1.0, 1.0}};
  const FitResult r = global_search(f, b, 0);
  EXPECT_EQ(r.evaluations, InitialDesignSize({}, 2));
}

TEST(GlobalSearchTest, IncumbentIsRunningMinimum) {
  auto f = [](const std::vector<double>& x) { return std::cos(5 * x[0]) * x[1]; };
  const Bounds b{{-1.0, -1.0}, {1.0, 1.0}};
  const FitResult r = global_search(f, b, 20);
  double running = std::numeric_limits<double>::infinity();
  for (const TraceEntry& e : r.trace) running = std::min(running, e.value);
  EXPECT_DOUBLE_EQ(running, r.best_value);
}

// ---- fluid objective ----

TEST(FluidObjectiveTest, ZeroAtTruthWorseElsewhere) {
  const SwimmerConfig c;
  const double w = 2 * kPi * 0.6;
  std::vector<FluidReference> refs{{SimulateInWater(c, w, 0.4, 3.0, 60), w}};
  const auto truth = c.fluid.AsArray();
  std::vector<double> x(truth.begin(), truth.end());
  x.push_back(0.4);
  EXPECT_LT(FluidObjective(refs, c, x), 1e-9);
  std::vector<double> zero{0, 0, 0, 0, 0, 0.4};
  EXPECT_GT(FluidObjective(refs, c, zero), 1e-3);
  EXPECT_THROW(FluidObjective(refs, c, {1, 2, 3}), Error);
}

// Re-evaluating any trace entry reproduces the stored value exactly.
TEST(FluidObjectiveTest, TraceIsReproducible) {
  const SwimmerConfig c;
  const double w = 2 * kPi * 1.0;
  std::vector<FluidReference> refs{{SimulateInWater(c, w, 0.0, 2.0, 60), w}};
  auto f = [&](const std::vector<double>& x) { return FluidObjective(refs, c, x); };
  NelderMeadOptions o;
  o.max_evals = 12;
  const Bounds b = FluidBounds(1);
  const FitResult r = nelder_mead(f, {1, 5, 2, 3, 1, 0.5}, o, &b);
  ASSERT_FALSE(r.trace.empty());
  for (const TraceEntry& e : r.trace) EXPECT_EQ(f(e.x), e.value);
}

}  // namespace
}  // namespace fishsim
