// include/sigvc/dsp/toy-corpus.h

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


#ifndef SIGVC_DSP_TOY_CORPUS_H_
#define SIGVC_DSP_TOY_CORPUS_H_

// Synthetic multi-speaker corpus.  Every speaker reads the same scripts
// (phone sequence + pitch contour shape); speakers differ in pitch range,
// vocal-tract length (formant scaling), spectral tilt, breathiness and one
// fixed extra resonance.  Output is fully determined by the seed.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sigvc/corpus/manifest.h"
#include "sigvc/dsp/audio.h"

namespace sigvc {

/// Phone 0 is silence, 1..8 are vowels, 9 is a fricative.
constexpr int kToyPhoneCount = 10;

struct ToySpeaker {
  double f0 = 120.0;
  double formant_scale = 1.0;
  double tilt = 1.0;
  double breath = 0.01;
  double extra_resonance_hz = 3000.0;
};

struct ToyScript {
  std::vector<PhoneSegment> phones;  // seconds from speech onset
  double duration = 0.0;
  double pitch_rate = 1.0;   // cycles of pitch movement per utterance
  double pitch_phase = 0.0;
};

struct ToyCorpusOptions {
  int num_speakers = 4;
  int utts_per_speaker = 5;
  uint64_t seed = 7;
  double speech_seconds = 1.8;
  double pad_seconds = 0.1;
  int sample_rate = 16000;
};

std::vector<ToySpeaker> MakeToySpeakers(int num_speakers, uint64_t seed);
ToyScript MakeToyScript(int index, double duration, uint64_t seed);

/// Renders one utterance with pad_seconds of digital silence on each side.
/// Phone labels (shifted by the pad) are appended to *labels when given.
Waveform SynthesizeToyUtterance(const ToySpeaker &speaker, const ToyScript &script,
                                int sample_rate, double pad_seconds, uint64_t noise_seed,
                                std::vector<PhoneSegment> *labels = nullptr);

/// Writes <out_dir>/wav/spkXX_uttYY.wav and <out_dir>/manifest.json and
/// returns the manifest path.
std::filesystem::path MakeToyCorpus(const std::filesystem::path &out_dir,
                                    const ToyCorpusOptions &opts);

/// Phone label of each Mel frame, sampled at the frame centre.
/// offset_samples is where the analysed audio starts within the file.
std::vector<int64_t> PhoneLabelsForFrames(const std::vector<PhoneSegment> &phones,
                                          int64_t num_frames, int hop_length,
                                          int sample_rate, int64_t offset_samples);

}  // namespace sigvc

#endif  // SIGVC_DSP_TOY_CORPUS_H_
