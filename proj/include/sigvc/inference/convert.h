// include/sigvc/inference/convert.h

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


#ifndef SIGVC_INFERENCE_CONVERT_H_
#define SIGVC_INFERENCE_CONVERT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sigvc/config/run-config.h"
#include "sigvc/dsp/audio.h"
#include "sigvc/encoders/encoders.h"
#include "sigvc/inference/griffin-lim.h"
#include "sigvc/model/sigvc-model.h"
#include "sigvc/training/checkpoint.h"

namespace sigvc {

enum class VocoderMode { kGriffinLim, kExternal, kNone };

VocoderMode ParseVocoderMode(const std::string &name);
std::string VocoderModeName(VocoderMode mode);

struct ConversionRequest {
  std::filesystem::path source_wav;
  std::vector<std::filesystem::path> target_reference_wavs;
  std::filesystem::path checkpoint;
  // The converted Mel goes to output with extension ".mel" (plus sidecar),
  // audio to output with extension ".wav".
  std::filesystem::path output;
  VocoderMode vocoder = VocoderMode::kGriffinLim;
};

struct ConversionResult {
  MelSpectrogram mel;  // PostNet output, same T as the source
  IntermediateRepresentation intermediate;
  SpeakerEmbedding source_speaker;
  SpeakerEmbedding target_speaker;  // average over the references
  std::optional<Waveform> waveform;
  std::filesystem::path mel_path;
  std::optional<std::filesystem::path> wav_path;
};

/// A loaded checkpoint ready for zero-shot conversion.
class Converter {
 public:
  explicit Converter(LoadedModel loaded);
  static Converter FromCheckpoint(const std::filesystem::path &dir,
                                  const RunConfig *runtime = nullptr);

  /// Remove the source speaker, add the target embedding, refine.
  ConversionResult ConvertMel(const MelSpectrogram &source,
                              const SpeakerEmbedding &target_speaker);
  ConversionResult ConvertMel(const MelSpectrogram &source,
                              const std::vector<MelSpectrogram> &target_references);

  MelSpectrogram LoadMel(const std::filesystem::path &wav) const;
  SpeakerEmbedding Embed(const MelSpectrogram &mel);

  const RunConfig &config() const { return loaded_.config; }
  SigVcModel &model() { return loaded_.model; }
  SpeakerEncoder &speaker_encoder() { return *loaded_.speaker_encoder; }

 private:
  LoadedModel loaded_;
};

/// Full file-to-file conversion.  `runtime`, when given, must be
/// compatible with the checkpoint.  inference settings (Griffin-Lim
/// iterations, external vocoder command) come from the checkpoint config
/// unless `runtime` is given.
ConversionResult Convert(const ConversionRequest &req, const RunConfig *runtime = nullptr);

/// Writes the Mel feature file and runs the command template with {input}
/// and {output}; a nonzero exit status is raised as kRuntime carrying it.
void RunExternalVocoder(const std::string &command, const MelSpectrogram &mel,
                        const std::filesystem::path &mel_path,
                        const std::filesystem::path &wav_path);

}  // namespace sigvc

#endif  // SIGVC_INFERENCE_CONVERT_H_
