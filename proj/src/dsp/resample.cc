// src/dsp/resample.cc

// Copyright 2026  sigvc authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <numbers>
#include <numeric>

#include "sigvc/dsp/audio.h"
#include "sigvc/util/error.h"

namespace sigvc {

namespace {

constexpr int kZeroCrossings = 16;
constexpr double kKaiserBeta = 8.6;
constexpr double kRolloff = 0.95;

double Kaiser(double x, double half_width) {
  double r = x / half_width;
  if (std::abs(r) >= 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) /
         std::cyl_bessel_i(0.0, kKaiserBeta);
}

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

int64_t ResampledLength(int64_t n, int from_rate, int to_rate) {
  return (n * to_rate + from_rate / 2) / from_rate;
}

Waveform Resample(const Waveform &wave, int target_rate) {
  if (wave.sample_rate <= 0 || target_rate <= 0)
    Fail(ErrorKind::kValidation, "sample rates must be positive");
  if (wave.sample_rate == target_rate) return wave;

  const int64_t g = std::gcd(wave.sample_rate, target_rate);
  const int64_t up = target_rate / g;         // L
  const int64_t down = wave.sample_rate / g;  // M
  // Cutoff relative to the input Nyquist.
  const double cutoff = kRolloff * std::min(1.0, static_cast<double>(up) / down);
  const double half_width = kZeroCrossings / cutoff;  // in input samples
  const int64_t taps = static_cast<int64_t>(std::ceil(half_width));

  // One kernel per output phase p/L; kernel[p][j] weights input i0 - taps + 1 + j.
  const int64_t span = 2 * taps;
  std::vector<double> table(up * span);
  for (int64_t p = 0; p < up; ++p) {
    double frac = static_cast<double>(p) / up;
    for (int64_t j = 0; j < span; ++j) {
      double x = static_cast<double>(j - taps + 1) - frac;
      table[p * span + j] = cutoff * Sinc(cutoff * x) * Kaiser(x, half_width);
    }
  }

  const int64_t n_in = wave.size();
  const int64_t n_out = ResampledLength(n_in, wave.sample_rate, target_rate);
  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(n_out);
  for (int64_t n = 0; n < n_out; ++n) {
    const int64_t num = n * down;
    const int64_t i0 = num / up;
    const int64_t phase = num % up;
    const double *k = &table[phase * span];
    double acc = 0.0;
    for (int64_t j = 0; j < span; ++j) {
      int64_t i = i0 - taps + 1 + j;
      if (i < 0 || i >= n_in) continue;
      acc += k[j] * wave.samples[i];
    }
    out.samples[n] = static_cast<float>(acc);
  }
  return out;
}

}  // namespace sigvc
