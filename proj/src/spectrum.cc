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

#include "fishsim/spectrum.h"

#include <algorithm>
#include <cmath>

#include <fftw3.h>

namespace fishsim {

Spectrum MagnitudeSpectrum(std::span<const double> signal, double dt, size_t pad_to) {
  const size_t n = signal.size();
  if (n < 4) throw Error("spectrum needs at least 4 samples");
  if (!(dt > 0.0)) throw Error("spectrum sample spacing must be positive");
  size_t n_fft = 1;
  while (n_fft < std::max(n, pad_to)) n_fft <<= 1;

  double mean = 0.0;
  for (double v : signal) mean += v;
  mean /= n;

  std::vector<double> in(n_fft, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * i / (n - 1));
    in[i] = (signal[i] - mean) * w;
  }
  const size_t n_out = n_fft / 2 + 1;
  fftw_complex* out = fftw_alloc_complex(n_out);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_fft), in.data(), out, FFTW_ESTIMATE);
  fftw_execute(plan);

  Spectrum s;
  s.bin_width = 1.0 / (n_fft * dt);
  s.magnitude.resize(n_out);
  for (size_t k = 0; k < n_out; ++k) s.magnitude[k] = std::hypot(out[k][0], out[k][1]);
  fftw_destroy_plan(plan);
  fftw_free(out);
  return s;
}

double dominant_frequency(std::span<const double> signal, double dt) {
  // 8x zero padding keeps the interpolation bias far below one raw bin.
  const Spectrum s = MagnitudeSpectrum(signal, dt, 8 * signal.size());
  const auto& m = s.magnitude;

  double scale = 0.0;
  for (double v : signal) scale = std::max(scale, std::abs(v));
  // Skip the DC bin and the leakage of the mean removal next to it.
  size_t peak = 0;
  for (size_t k = 2; k + 1 < m.size(); ++k) {
    if (m[k] >= m[k - 1] && m[k] >= m[k + 1] && (peak == 0 || m[k] > m[peak])) peak = k;
  }
  if (peak == 0 || !(m[peak] > 1e-9 * scale * signal.size())) {
    throw NoPeakError("signal has no spectral peak");
  }
  const double a = std::log(m[peak - 1] + 1e-300);
  const double b = std::log(m[peak] + 1e-300);
  const double c = std::log(m[peak + 1] + 1e-300);
  const double denom = a - 2.0 * b + c;
  double delta = denom < 0.0 ? 0.5 * (a - c) / denom : 0.0;
  delta = std::clamp(delta, -0.5, 0.5);
  return (peak + delta) * s.bin_width;
}

}  // namespace fishsim
