// src/dsp/mel-spectrogram.cc

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

#include "sigvc/dsp/audio.h"
#include "sigvc/util/error.h"

namespace sigvc {

namespace {

// Slaney Mel scale: linear below 1 kHz, logarithmic above.
constexpr double kFSp = 200.0 / 3.0;
constexpr double kMinLogHz = 1000.0;
constexpr double kMinLogMel = kMinLogHz / kFSp;
const double kLogStep = std::log(6.4) / 27.0;

double HzToMel(double hz) {
  if (hz < kMinLogHz) return hz / kFSp;
  return kMinLogMel + std::log(hz / kMinLogHz) / kLogStep;
}

double MelToHz(double mel) {
  if (mel < kMinLogMel) return mel * kFSp;
  return kMinLogHz * std::exp(kLogStep * (mel - kMinLogMel));
}

// numpy-style "reflect" padding, repeating the reflection when pad >= n.
std::vector<float> ReflectPad(const float *x, int64_t n, int64_t pad) {
  std::vector<float> out(n + 2 * pad);
  const int64_t period = 2 * (n - 1);
  for (int64_t i = 0; i < n + 2 * pad; ++i) {
    int64_t j = i - pad;
    if (n == 1) {
      j = 0;
    } else {
      j = ((j % period) + period) % period;
      if (j >= n) j = period - j;
    }
    out[i] = x[j];
  }
  return out;
}

}  // namespace

int64_t NumMelFrames(int64_t num_samples, int hop_length) {
  return num_samples / hop_length + 1;
}

torch::Tensor MelFilterbank(const DspConfig &cfg) {
  const int64_t bins = cfg.n_fft / 2 + 1;
  const double mel_lo = HzToMel(cfg.fmin), mel_hi = HzToMel(cfg.fmax);
  std::vector<double> edges(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i)
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (cfg.n_mels + 1));

  torch::Tensor fb = torch::zeros({cfg.n_mels, bins}, torch::kFloat64);
  auto acc = fb.accessor<double, 2>();
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    const double enorm = 2.0 / (hi - lo);
    for (int64_t k = 0; k < bins; ++k) {
      double f = static_cast<double>(k) * cfg.sample_rate / cfg.n_fft;
      double w = std::min((f - lo) / (mid - lo), (hi - f) / (hi - mid));
      acc[m][k] = std::max(0.0, w) * enorm;
    }
  }
  return fb.to(torch::kFloat32);
}

torch::Tensor StftMagnitude(const torch::Tensor &samples, const DspConfig &cfg) {
  TORCH_CHECK(samples.dim() == 1, "StftMagnitude expects a 1-D signal");
  torch::Tensor x = samples.to(torch::kFloat32).contiguous();
  const int64_t n = x.numel();
  if (n == 0) Fail(ErrorKind::kEmptyInput, "empty signal");
  std::vector<float> padded = ReflectPad(x.data_ptr<float>(), n, cfg.n_fft / 2);
  torch::Tensor xp = torch::from_blob(padded.data(), {static_cast<int64_t>(padded.size())},
                                      torch::kFloat32).clone();
  torch::Tensor window = torch::hann_window(cfg.win_length, /*periodic=*/true);
  torch::Tensor spec = torch::stft(xp, cfg.n_fft, cfg.hop_length, cfg.win_length, window,
                                   /*normalized=*/false, /*onesided=*/true,
                                   /*return_complex=*/true);
  return spec.abs().transpose(0, 1).contiguous();  // [T, bins]
}

MelSpectrogram ComputeMelSpectrogram(const Waveform &wave, const DspConfig &cfg) {
  if (wave.sample_rate != cfg.sample_rate)
    Fail(ErrorKind::kConfigMismatch,
         "waveform is " + std::to_string(wave.sample_rate) + " Hz, expected " +
             std::to_string(cfg.sample_rate));
  if (wave.empty()) Fail(ErrorKind::kEmptyInput, "cannot analyse an empty waveform");
  torch::Tensor x = torch::from_blob(const_cast<float *>(wave.samples.data()),
                                     {wave.size()}, torch::kFloat32);
  torch::Tensor mag = StftMagnitude(x, cfg);
  torch::Tensor mel = torch::matmul(mag, MelFilterbank(cfg).transpose(0, 1));
  MelSpectrogram out;
  out.values = torch::log(torch::clamp_min(mel, cfg.log_floor)).contiguous();
  out.sample_rate = cfg.sample_rate;
  out.hop_length = cfg.hop_length;
  out.win_length = cfg.win_length;
  return out;
}

MelSpectrogram MelFromFile(const std::filesystem::path &path, const DspConfig &cfg,
                           int64_t *trim_offset) {
  Waveform wave = LoadAndResample(path, cfg.sample_rate);
  int64_t offset = 0;
  if (cfg.trim) {
    TrimResult t = TrimSilence(wave, cfg.trim_threshold_db, cfg.trim_frame_length,
                               cfg.trim_hop_length);
    offset = t.start_sample;
    wave = std::move(t.waveform);
  }
  if (trim_offset) *trim_offset = offset;
  return ComputeMelSpectrogram(wave, cfg);
}

}  // namespace sigvc
