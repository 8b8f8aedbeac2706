// src/inference/convert.cc

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


#include "sigvc/inference/convert.h"

#include <sys/wait.h>

#include <cstdlib>

#include "sigvc/dsp/feature-io.h"
#include "sigvc/encoders/external-encoders.h"
#include "sigvc/util/error.h"

namespace sigvc {

namespace fs = std::filesystem;

VocoderMode ParseVocoderMode(const std::string &name) {
  if (name == "griffin_lim") return VocoderMode::kGriffinLim;
  if (name == "external") return VocoderMode::kExternal;
  if (name == "none") return VocoderMode::kNone;
  Fail(ErrorKind::kValidation, "unknown vocoder '" + name + "' (griffin_lim, external, none)");
}

std::string VocoderModeName(VocoderMode mode) {
  switch (mode) {
    case VocoderMode::kGriffinLim: return "griffin_lim";
    case VocoderMode::kExternal: return "external";
    case VocoderMode::kNone: return "none";
  }
  return "none";
}

Converter::Converter(LoadedModel loaded) : loaded_(std::move(loaded)) {
  loaded_.model->eval();
}

Converter Converter::FromCheckpoint(const fs::path &dir, const RunConfig *runtime) {
  return Converter(LoadModelCheckpoint(dir, runtime));
}

MelSpectrogram Converter::LoadMel(const fs::path &wav) const {
  return MelFromFile(wav, loaded_.config.dsp());
}

SpeakerEmbedding Converter::Embed(const MelSpectrogram &mel) {
  return ExtractSpeakerEmbedding(*loaded_.speaker_encoder, mel);
}

ConversionResult Converter::ConvertMel(const MelSpectrogram &source,
                                       const SpeakerEmbedding &target_speaker) {
  if (source.num_frames() < 2)
    Fail(ErrorKind::kTooShort, "source has " + std::to_string(source.num_frames()) +
                                   " frames, conversion needs at least 2");
  torch::NoGradGuard no_grad;
  ConversionResult r;
  ContentFeature content = ExtractContent(*loaded_.content_encoder, source);
  r.source_speaker = Embed(source);
  r.target_speaker = target_speaker;
  r.intermediate = RemoveSpeakerInfo(loaded_.model, content, r.source_speaker);
  r.mel = PostnetRefine(loaded_.model,
                        AddSpeakerInfo(loaded_.model, r.intermediate, r.target_speaker));
  return r;
}

ConversionResult Converter::ConvertMel(const MelSpectrogram &source,
                                       const std::vector<MelSpectrogram> &target_references) {
  if (target_references.empty())
    Fail(ErrorKind::kValidation, "conversion needs at least one target reference");
  std::vector<SpeakerEmbedding> embs;
  for (const auto &m : target_references) embs.push_back(Embed(m));
  return ConvertMel(source, AverageSpeakerEmbedding(embs));
}

void RunExternalVocoder(const std::string &command, const MelSpectrogram &mel,
                        const fs::path &mel_path, const fs::path &wav_path) {
  if (command.empty())
    Fail(ErrorKind::kValidation, "inference.external_vocoder_command is not set");
  WriteMel(mel_path, mel);
  const std::string cmd = ExpandCommand(command, mel_path.string(), wav_path.string());
  int status = std::system(cmd.c_str());
  if (status != 0) {
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : status;
    Fail(ErrorKind::kRuntime, "external vocoder exited with status " + std::to_string(code));
  }
}

ConversionResult Convert(const ConversionRequest &req, const RunConfig *runtime) {
  if (req.target_reference_wavs.empty())
    Fail(ErrorKind::kValidation, "conversion needs at least one target reference");
  if (req.output.empty()) Fail(ErrorKind::kValidation, "conversion needs an output path");
  Converter conv = Converter::FromCheckpoint(req.checkpoint, runtime);
  const RunConfig &cfg = runtime ? *runtime : conv.config();

  MelSpectrogram source = conv.LoadMel(req.source_wav);
  std::vector<MelSpectrogram> refs;
  for (const auto &p : req.target_reference_wavs) refs.push_back(conv.LoadMel(p));
  ConversionResult r = conv.ConvertMel(source, refs);

  if (!req.output.parent_path().empty()) fs::create_directories(req.output.parent_path());
  r.mel_path = fs::path(req.output).replace_extension(".mel");
  const fs::path wav_path = fs::path(req.output).replace_extension(".wav");
  const InferenceConfig icfg = cfg.inference();
  switch (req.vocoder) {
    case VocoderMode::kNone:
      WriteMel(r.mel_path, r.mel);
      break;
    case VocoderMode::kGriffinLim: {
      WriteMel(r.mel_path, r.mel);
      GriffinLimOptions opts;
      opts.iterations = icfg.griffin_lim_iterations;
      opts.nnls_iterations = icfg.nnls_iterations;
      r.waveform = GriffinLim(r.mel, opts, cfg.dsp()).waveform;
      WriteWav(wav_path, *r.waveform);
      r.wav_path = wav_path;
      break;
    }
    case VocoderMode::kExternal:
      RunExternalVocoder(icfg.external_vocoder_command, r.mel, r.mel_path, wav_path);
      r.wav_path = wav_path;
      break;
  }
  return r;
}

}  // namespace sigvc
