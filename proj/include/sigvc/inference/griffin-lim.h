// include/sigvc/inference/griffin-lim.h

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


#ifndef SIGVC_INFERENCE_GRIFFIN_LIM_H_
#define SIGVC_INFERENCE_GRIFFIN_LIM_H_

#include <vector>

#include <torch/torch.h>

#include "sigvc/dsp/audio.h"

namespace sigvc {

struct GriffinLimOptions {
  int iterations = 60;
  int nnls_iterations = 200;
  bool normalize_peak = true;
};

struct GriffinLimResult {
  Waveform waveform;                  // (T - 1) * hop samples
  torch::Tensor magnitude;            // [T, n_fft/2 + 1] target from the Mel inverse
  double spectral_error = 0.0;        // || |STFT(x)| - target ||_F / ||target||_F
  std::vector<double> error_curve;    // spectral_error after each iteration
};

/// Non-negative least squares per frame: argmin_{S >= 0} ||S F^T - M||,
/// solved by projected gradient.  mel_magnitude is [T, n_mels] (linear,
/// not log); returns [T, n_fft/2 + 1].
torch::Tensor InvertMelFilterbank(const torch::Tensor &mel_magnitude, const DspConfig &cfg,
                                  int iterations);

/// Zero-padded centred STFT magnitude paired with the inverse below, so each
/// iteration is an exact projection.
torch::Tensor ConsistentStftMagnitude(const torch::Tensor &samples, const DspConfig &cfg);

/// Phase reconstruction from zero initial phase.
GriffinLimResult GriffinLim(const MelSpectrogram &mel, const GriffinLimOptions &opts,
                            const DspConfig &cfg = {});

}  // namespace sigvc

#endif  // SIGVC_INFERENCE_GRIFFIN_LIM_H_
