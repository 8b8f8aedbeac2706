// src/dsp/trim.cc

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


#include <algorithm>
#include <cmath>

#include "sigvc/dsp/audio.h"
#include "sigvc/util/error.h"

namespace sigvc {

namespace {

// Index range [first, last] of frames at or above the threshold, or
// first > last when every frame is silent.
std::pair<int64_t, int64_t> LoudFrames(const float *x, int64_t n, double min_rms,
                                       int frame_length, int hop_length) {
  const int64_t num_frames = n / hop_length + 1;
  const int64_t half = frame_length / 2;
  std::vector<double> csum(n + 1, 0.0);
  for (int64_t i = 0; i < n; ++i) csum[i + 1] = csum[i] + double(x[i]) * x[i];
  int64_t first = num_frames, last = -1;
  for (int64_t k = 0; k < num_frames; ++k) {
    int64_t a = std::clamp<int64_t>(k * hop_length - half, 0, n);
    int64_t b = std::clamp<int64_t>(k * hop_length + half, 0, n);
    double rms = std::sqrt((csum[b] - csum[a]) / frame_length);
    if (rms >= min_rms) {
      first = std::min(first, k);
      last = k;
    }
  }
  return {first, last};
}

}  // namespace

TrimResult TrimSilence(const Waveform &wave, double threshold_db,
                       int frame_length, int hop_length) {
  if (wave.empty()) Fail(ErrorKind::kEmptyInput, "cannot trim an empty waveform");
  if (frame_length <= 0 || hop_length <= 0)
    Fail(ErrorKind::kValidation, "trim frame and hop must be positive");

  TrimResult result;
  result.waveform = wave;
  result.end_sample = wave.size();
  float peak = 0.0f;
  for (float s : wave.samples) peak = std::max(peak, std::abs(s));
  if (peak == 0.0f) {
    result.all_silent = true;
    return result;
  }
  const double min_rms = peak * std::pow(10.0, threshold_db / 20.0);

  int64_t start = 0, end = wave.size();
  // Shrinking can drop a boundary frame below threshold, so iterate to a
  // fixed point; the peak always survives, so the threshold is unchanged.
  for (;;) {
    auto [first, last] = LoudFrames(wave.samples.data() + start, end - start,
                                    min_rms, frame_length, hop_length);
    if (first > last) {
      if (start == 0 && end == wave.size()) {
        result.all_silent = true;
        return result;
      }
      break;
    }
    int64_t new_start = start + first * hop_length;
    int64_t new_end = std::min(end, start + (last + 1) * hop_length);
    if (new_start == start && new_end == end) break;
    start = new_start;
    end = new_end;
  }
  result.start_sample = start;
  result.end_sample = end;
  result.waveform.samples.assign(wave.samples.begin() + start,
                                 wave.samples.begin() + end);
  return result;
}

}  // namespace sigvc
