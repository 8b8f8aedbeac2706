// tests/fixtures.h

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


#ifndef SIGVC_TESTS_FIXTURES_H_
#define SIGVC_TESTS_FIXTURES_H_

// Small shared objects for the unit tests: random Mel matrices, untrained
// frozen encoders, a reduced model configuration and a tiny on-disk corpus
// with briefly pretrained encoders.

#include <filesystem>
#include <memory>
#include <string>

#include "sigvc/config/run-config.h"
#include "sigvc/dsp/toy-corpus.h"
#include "sigvc/encoders/toy-encoders.h"
#include "sigvc/model/sigvc-model.h"
#include "test-util.h"

namespace sigvc::testing {

inline MelSpectrogram RandomMel(int64_t frames, uint64_t seed = 0) {
  torch::manual_seed(seed);
  MelSpectrogram m;
  m.values = torch::randn({frames, 80}) - 4.0;
  m.sample_rate = 16000;
  m.hop_length = 256;
  m.win_length = 1024;
  return m;
}

inline std::shared_ptr<ToyContentEncoder> UntrainedContentEncoder(uint64_t seed = 3) {
  torch::manual_seed(seed);
  auto enc = std::make_shared<ToyContentEncoder>(ToyContentNet(ToyContentOptions{}));
  enc->Freeze();
  return enc;
}

inline std::shared_ptr<ToySpeakerEncoder> UntrainedSpeakerEncoder(uint64_t seed = 4) {
  torch::manual_seed(seed);
  auto enc = std::make_shared<ToySpeakerEncoder>(ToySpeakerNet(ToySpeakerOptions{}));
  enc->Freeze();
  return enc;
}

inline ModelConfig SmallModelConfig() {
  ModelConfig c;
  c.width = 32;
  c.prenet_width = 32;
  c.ffn_width = 64;
  c.postnet_width = 32;
  c.heads = 2;
  return c;
}

/// 2 speakers x 3 utterances with encoders pretrained for a few steps,
/// created once per process.
struct TinySetup {
  std::filesystem::path root;
  std::filesystem::path manifest;
  std::filesystem::path content_encoder;
  std::filesystem::path speaker_encoder;

  /// Config wired to the corpus and encoders with a reduced model.
  RunConfig Config(int64_t max_steps = 4) const {
    RunConfig c;
    c.Set("training.dataset_manifest", manifest.string());
    c.Set("encoders.content.checkpoint_path", content_encoder.string());
    c.Set("encoders.speaker.checkpoint_path", speaker_encoder.string());
    c.Set("model.width", "32");
    c.Set("model.prenet_width", "32");
    c.Set("model.ffn_width", "64");
    c.Set("model.postnet_width", "32");
    c.Set("training.batch_size", "2");
    c.Set("training.max_steps", std::to_string(max_steps));
    c.Set("training.checkpoint_interval", "2");
    c.Set("inference.griffin_lim_iterations", "3");
    c.Set("inference.nnls_iterations", "20");
    return c;
  }
};

const TinySetup &Tiny();

}  // namespace sigvc::testing

#endif  // SIGVC_TESTS_FIXTURES_H_
