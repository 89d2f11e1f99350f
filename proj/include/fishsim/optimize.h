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

// Derivative-free minimizers used by the identification stages: an
// adaptive-coefficient Nelder-Mead simplex and a Gaussian-process
// expected-improvement global search over a box.

#ifndef FISHSIM_OPTIMIZE_H_
#define FISHSIM_OPTIMIZE_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "fishsim/core.h"

namespace fishsim {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  size_t size() const { return lower.size(); }
  void Validate() const;
  bool Contains(const std::vector<double>& x) const;
  // Mirrors coordinates that left the box back inside it.
  std::vector<double> Reflect(std::vector<double> x) const;
};

struct TraceEntry {
  std::vector<double> x;
  double value = 0.0;
};

struct FitResult {
  std::vector<double> best;
  double best_value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  std::vector<TraceEntry> trace;

  // Appends one evaluation and updates the incumbent.
  void Record(const std::vector<double>& x, double value);
  void Append(const FitResult& other);
};

// NaN or an exception-free non-finite value counts as +infinity.
double SanitizeObjective(double value);

struct NelderMeadOptions {
  int max_evals = 300;
  double tolerance = 1e-6;    // stop when every vertex is this close to the best
  double initial_step = 0.1;  // fraction of the box width, or absolute without bounds
};

FitResult nelder_mead(const ObjectiveFn& f, const std::vector<double>& x0,
                      const NelderMeadOptions& options = {}, const Bounds* bounds = nullptr);

struct GlobalSearchOptions {
  int initial_design = 0;  // Latin hypercube size, 0 = max(10, 2 d + 2)
  uint64_t seed = 0;
  int candidates = 1000;   // random acquisition candidates per iteration
};

int InitialDesignSize(const GlobalSearchOptions& options, size_t dims);

// Evaluates a Latin hypercube design, then budget further points chosen by
// expected improvement under a Matern-5/2 Gaussian process fitted to the
// evaluations so far (inputs scaled to the unit box, outputs standardized).
// A failed surrogate fit falls back to a uniform random point.
FitResult global_search(const ObjectiveFn& f, const Bounds& bounds, int budget,
                        const GlobalSearchOptions& options = {});

}  // namespace fishsim

#endif  // FISHSIM_OPTIMIZE_H_
