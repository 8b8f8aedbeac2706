// include/sigvc/dsp/audio.h

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


#ifndef SIGVC_DSP_AUDIO_H_
#define SIGVC_DSP_AUDIO_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include <torch/torch.h>

namespace sigvc {

/// Front-end settings shared by every path that touches audio.  The speaker
/// encoder, the content encoder and the synthesis model all consume Mel
/// features computed with this one configuration.
struct DspConfig {
  int sample_rate = 16000;
  int n_mels = 80;
  int hop_length = 256;
  int win_length = 1024;
  int n_fft = 1024;
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-5;
  bool trim = true;
  double trim_threshold_db = -40.0;
  int trim_frame_length = 1024;
  int trim_hop_length = 256;
};

struct Waveform {
  std::vector<float> samples;
  int sample_rate = 0;

  int64_t size() const { return static_cast<int64_t>(samples.size()); }
  bool empty() const { return samples.empty(); }
};

/// Log-amplitude Mel energies, one row per frame.
struct MelSpectrogram {
  torch::Tensor values;  // [T, n_mels], float32
  int sample_rate = 16000;
  int hop_length = 256;
  int win_length = 1024;

  int64_t num_frames() const { return values.size(0); }
  int64_t num_bins() const { return values.size(1); }
};

/// Raw decoded WAV contents, interleaved when multichannel.
struct WavData {
  int sample_rate = 0;
  int channels = 0;
  std::vector<float> interleaved;
};

WavData ReadWav(const std::filesystem::path &path);

/// Writes mono 16-bit PCM.  Samples are clipped to [-1, 1].
void WriteWav(const std::filesystem::path &path, const Waveform &wave);

/// round(n * to / from), the exact output length of Resample().
int64_t ResampledLength(int64_t n, int from_rate, int to_rate);

/// Rational-ratio polyphase resampler with a Kaiser-windowed sinc kernel.
/// Identity when the rates match.
Waveform Resample(const Waveform &wave, int target_rate);

/// Decode, average channels to mono, resample, and scale down so the peak
/// does not exceed 1.
Waveform LoadAndResample(const std::filesystem::path &path,
                         int target_rate = 16000);

struct TrimResult {
  Waveform waveform;
  int64_t start_sample = 0;  // offset of the kept region in the input
  int64_t end_sample = 0;    // one past the kept region
  bool all_silent = false;
};

/// Removes leading and trailing frames whose RMS is below threshold_db
/// relative to the waveform peak.  Frames are centred on multiples of
/// hop_length.  The result is a fixed point: trimming it again is a no-op.
/// An all-silent input is returned unchanged with all_silent set.
TrimResult TrimSilence(const Waveform &wave, double threshold_db = -40.0,
                       int frame_length = 1024, int hop_length = 256);

/// floor(n / hop) + 1.
int64_t NumMelFrames(int64_t num_samples, int hop_length);

/// Slaney-normalised triangular Mel filters, [n_mels, n_fft / 2 + 1].
torch::Tensor MelFilterbank(const DspConfig &cfg);

/// Centre-padded (reflect) STFT magnitudes with a periodic Hann window,
/// [T, n_fft / 2 + 1] with T = floor(n / hop) + 1.
torch::Tensor StftMagnitude(const torch::Tensor &samples, const DspConfig &cfg);

/// log(max(mel_filterbank * |STFT|, floor)).
MelSpectrogram ComputeMelSpectrogram(const Waveform &wave, const DspConfig &cfg = {});

/// Load, resample, optionally trim, then ComputeMelSpectrogram.
MelSpectrogram MelFromFile(const std::filesystem::path &path,
                           const DspConfig &cfg, int64_t *trim_offset = nullptr);

}  // namespace sigvc

#endif  // SIGVC_DSP_AUDIO_H_
