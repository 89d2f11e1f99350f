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

// Dominant frequency of a uniformly sampled signal.

#ifndef FISHSIM_SPECTRUM_H_
#define FISHSIM_SPECTRUM_H_

#include <span>
#include <vector>

#include "fishsim/core.h"

namespace fishsim {

class NoPeakError : public Error {
 public:
  using Error::Error;
};

// Single-sided magnitude spectrum of the mean-removed, Hann-windowed signal
// zero padded to at least pad_to samples. bin k sits at k / (n_fft * dt).
struct Spectrum {
  std::vector<double> magnitude;
  double bin_width = 0.0;  // Hz
};

Spectrum MagnitudeSpectrum(std::span<const double> signal, double dt, size_t pad_to = 0);

// Largest non-DC spectral peak, refined by parabolic interpolation of the log
// magnitude around the peak bin. Throws NoPeakError for a flat signal.
double dominant_frequency(std::span<const double> signal, double dt);

}  // namespace fishsim

#endif  // FISHSIM_SPECTRUM_H_
