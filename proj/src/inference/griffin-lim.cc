// src/inference/griffin-lim.cc

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


#include "sigvc/inference/griffin-lim.h"

#include <cmath>

#include "sigvc/util/error.h"

namespace sigvc {

namespace {

torch::Tensor Window(const DspConfig &cfg) {
  return torch::hann_window(cfg.win_length, torch::TensorOptions().dtype(torch::kFloat64));
}

// Largest eigenvalue of F^T F by power iteration.
double LipschitzConstant(const torch::Tensor &fb) {
  torch::Tensor gram = fb.t().mm(fb);
  torch::Tensor v = torch::ones({gram.size(0), 1}, gram.options());
  double lambda = 0.0;
  for (int i = 0; i < 100; ++i) {
    torch::Tensor w = gram.mm(v);
    lambda = w.norm().item<double>();
    if (lambda == 0.0) break;
    v = w / lambda;
  }
  return lambda;
}

}  // namespace

torch::Tensor InvertMelFilterbank(const torch::Tensor &mel_magnitude, const DspConfig &cfg,
                                  int iterations) {
  if (mel_magnitude.dim() != 2 || mel_magnitude.size(1) != cfg.n_mels)
    Fail(ErrorKind::kShape, "Mel inverse expects [T, n_mels]");
  torch::Tensor fb = MelFilterbank(cfg).to(torch::kFloat64);  // [n_mels, bins]
  torch::Tensor m = mel_magnitude.to(torch::kFloat64);
  const double step = 1.0 / LipschitzConstant(fb);
  // Start from the transpose solution scaled per column.
  torch::Tensor colsum = fb.sum(0).clamp_min(1e-12);
  torch::Tensor s = m.mm(fb) / colsum;
  for (int i = 0; i < iterations; ++i) {
    torch::Tensor grad = (s.mm(fb.t()) - m).mm(fb);
    s = (s - step * grad).clamp_min(0.0);
  }
  return s;
}

torch::Tensor ConsistentStftMagnitude(const torch::Tensor &samples, const DspConfig &cfg) {
  torch::Tensor spec = torch::stft(samples.to(torch::kFloat64), cfg.n_fft, cfg.hop_length,
                                   cfg.win_length, Window(cfg), /*center=*/true, "constant",
                                   /*normalized=*/false, /*onesided=*/true,
                                   /*return_complex=*/true);
  return spec.abs().t();
}

GriffinLimResult GriffinLim(const MelSpectrogram &mel, const GriffinLimOptions &opts,
                            const DspConfig &cfg) {
  if (opts.iterations < 1) Fail(ErrorKind::kValidation, "Griffin-Lim needs at least one iteration");
  const int64_t num_frames = mel.num_frames();
  if (num_frames < 2) Fail(ErrorKind::kTooShort, "Griffin-Lim needs at least two frames");
  const int64_t length = (num_frames - 1) * cfg.hop_length;

  GriffinLimResult out;
  out.magnitude = InvertMelFilterbank(mel.values.to(torch::kFloat64).exp(), cfg,
                                      opts.nnls_iterations);
  torch::Tensor target = out.magnitude.t();  // [bins, T]
  const double target_norm = std::max(target.norm().item<double>(), 1e-12);
  torch::Tensor window = Window(cfg);
  torch::Tensor spec = torch::complex(target, torch::zeros_like(target));
  torch::Tensor x;
  for (int i = 0; i < opts.iterations; ++i) {
    x = torch::istft(spec, cfg.n_fft, cfg.hop_length, cfg.win_length, window,
                     /*center=*/true, /*normalized=*/false, /*onesided=*/true, length);
    torch::Tensor rebuilt = torch::stft(x, cfg.n_fft, cfg.hop_length, cfg.win_length, window,
                                        true, "constant", false, true, true);
    torch::Tensor mag = rebuilt.abs();
    out.error_curve.push_back((mag - target).norm().item<double>() / target_norm);
    torch::Tensor phase = rebuilt / mag.clamp_min(1e-12);
    phase = torch::where(mag > 1e-12, phase, torch::ones_like(phase));
    spec = target * phase;
  }
  out.spectral_error = out.error_curve.back();
  if (opts.normalize_peak) {
    double peak = x.abs().max().item<double>();
    if (peak > 0) x = x * (0.95 / peak);
  }
  torch::Tensor f = x.to(torch::kFloat32).contiguous();
  out.waveform.samples.assign(f.data_ptr<float>(), f.data_ptr<float>() + f.numel());
  out.waveform.sample_rate = cfg.sample_rate;
  return out;
}

}  // namespace sigvc
