// tests/fixtures.cc

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


#include "fixtures.h"

#include "sigvc/corpus/dataset.h"
#include "sigvc/training/trainer.h"

namespace sigvc::testing {

const TinySetup &Tiny() {
  static TempDir dir("tiny");
  static TinySetup setup = [] {
    TinySetup s;
    s.root = dir.path();
    ToyCorpusOptions opts;
    opts.num_speakers = 2;
    opts.utts_per_speaker = 3;
    opts.seed = 3;
    opts.speech_seconds = 0.6;
    s.manifest = MakeToyCorpus(s.root / "corpus", opts);
    RunConfig c;
    c.Set("training.dataset_manifest", s.manifest.string());
    c.Set("encoders.pretrain.steps", "5");
    c.Set("encoders.pretrain.batch_size", "2");
    PretrainEncoders(c, s.root / "encoders");
    s.content_encoder = s.root / "encoders" / "content_encoder.pt";
    s.speaker_encoder = s.root / "encoders" / "speaker_encoder.pt";
    return s;
  }();
  return setup;
}

}  // namespace sigvc::testing
