// tests/encoders-test.cc

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


#include <fstream>

#include "test-doctest.h"
#include "fixtures.h"
#include "sigvc/corpus/dataset.h"
#include "sigvc/encoders/encoders.h"
#include "sigvc/encoders/external-encoders.h"
#include "sigvc/evaluation/similarity.h"
#include "sigvc/util/batch.h"
#include "sigvc/util/error.h"

using namespace sigvc;
using namespace sigvc::testing;

TEST_CASE("content features are aligned to Mel frames") {
  auto enc = UntrainedContentEncoder();
  CHECK(ExtractContent(*enc, RandomMel(63)).values.sizes() == torch::IntArrayRef({63, 64}));
  CHECK(ExtractContent(*enc, RandomMel(2)).values.sizes() == torch::IntArrayRef({2, 64}));
}

TEST_CASE("speaker embeddings: shape, determinism, too-short input") {
  auto enc = UntrainedSpeakerEncoder();
  MelSpectrogram mel = RandomMel(40, 8);
  SpeakerEmbedding a = ExtractSpeakerEmbedding(*enc, mel);
  SpeakerEmbedding b = ExtractSpeakerEmbedding(*enc, mel);
  CHECK(a.dim() == 192);
  CHECK(torch::equal(a.values, b.values));
  try {
    ExtractSpeakerEmbedding(*enc, RandomMel(1));
    FAIL("no error");
  } catch (const SigvcError &e) {
    CHECK(e.kind() == ErrorKind::kTooShort);
  }
}

TEST_CASE("gradients reach the Mel input but not the frozen encoder") {
  auto enc = UntrainedSpeakerEncoder();
  torch::Tensor mel = (torch::randn({1, 30, 80}) - 4).set_requires_grad(true);
  torch::Tensor mask = torch::ones({1, 30}, torch::kBool);
  enc->Embed(mel, mask).pow(2).sum().backward();
  REQUIRE(mel.grad().defined());
  CHECK(mel.grad().abs().sum().item<double>() > 0);
  for (const auto &p : enc->net()->parameters()) {
    CHECK_FALSE(p.requires_grad());
    CHECK_FALSE(p.grad().defined());
  }
  CHECK(enc->frozen());
}

TEST_CASE("masked pooling ignores padding") {
  auto enc = UntrainedSpeakerEncoder();
  MelSpectrogram a = RandomMel(25, 1), b = RandomMel(40, 2);
  PaddedBatch batch = PadBatch({a.values, b.values});
  torch::NoGradGuard ng;
  torch::Tensor both = enc->Embed(batch.values, batch.mask);
  torch::Tensor alone = ExtractSpeakerEmbedding(*enc, a).values;
  CHECK(torch::allclose(both[0], alone, 1e-5, 1e-5));
}

TEST_CASE("average speaker embedding") {
  SpeakerEmbedding v{torch::tensor({1.0f, 2.0f})};
  CHECK(torch::equal(AverageSpeakerEmbedding({v}).values, v.values));
  SpeakerEmbedding x{torch::tensor({1.0f, 0.0f})}, y{torch::tensor({0.0f, 1.0f})};
  SpeakerEmbedding m = AverageSpeakerEmbedding({x, y});
  CHECK(torch::allclose(m.values, torch::tensor({0.5f, 0.5f})));
  CHECK(m.source == EmbeddingSource::kAverage);
  CHECK_THROWS_AS(AverageSpeakerEmbedding({}), SigvcError);
  SpeakerEmbedding z{torch::tensor({1.0f, 0.0f, 3.0f})};
  try {
    AverageSpeakerEmbedding({x, z});
    FAIL("no error");
  } catch (const SigvcError &e) {
    CHECK(e.kind() == ErrorKind::kDimensionMismatch);
  }
}

TEST_CASE("frame-rate alignment is exact on a ramp") {
  // Ramp sampled at 100 frames/s: value = time in seconds.
  const int64_t src_frames = 101;
  torch::Tensor ramp = torch::arange(src_frames, torch::kFloat64).unsqueeze(1) / 100.0;
  const double dst_rate = 16000.0 / 256;  // 62.5 frames/s
  const int64_t dst_frames = 63;
  torch::Tensor aligned = AlignToFrames(ramp, 100.0, dst_frames, dst_rate);
  REQUIRE(aligned.size(0) == dst_frames);
  for (int64_t t = 0; t < dst_frames; ++t)
    CHECK(aligned[t][0].item<double>() == doctest::Approx(t / dst_rate).epsilon(1e-12));
}

TEST_CASE("missing encoder checkpoints are reported") {
  EncoderSpec spec;
  spec.checkpoint_path = "/nonexistent/enc.pt";
  try {
    LoadSpeakerEncoder(spec);
    FAIL("no error");
  } catch (const SigvcError &e) {
    CHECK(e.kind() == ErrorKind::kEncoderUnavailable);
  }
}

TEST_CASE("toy encoders save and load bit-exactly") {
  TempDir dir("enc");
  auto c = UntrainedContentEncoder();
  auto s = UntrainedSpeakerEncoder();
  c->Save(dir / "c.pt");
  s->Save(dir / "s.pt");
  auto c2 = ToyContentEncoder::Load(dir / "c.pt");
  auto s2 = ToySpeakerEncoder::Load(dir / "s.pt");
  CHECK(c2->Checksum() == c->Checksum());
  CHECK(s2->Checksum() == s->Checksum());
  MelSpectrogram mel = RandomMel(30);
  CHECK(torch::equal(ExtractSpeakerEmbedding(*s, mel).values,
                     ExtractSpeakerEmbedding(*s2, mel).values));
}

TEST_CASE("external adapter runs a command template") {
  TempDir dir("ext");
  // A shell "encoder" that copies the input features and declares a frame rate.
  const std::string script = (dir / "enc.sh").string();
  {
    std::ofstream os(script);
    os << "#!/bin/sh\ncp \"$1\" \"$2\"\n"
       << "sed 's/\"kind\"/\"frame_rate\":62.5,\"kind\"/' \"$1.json\" > \"$2.json\"\n";
  }
  std::filesystem::permissions(script, std::filesystem::perms::owner_all);
  EncoderSpec spec;
  spec.type = "external";
  spec.command = script + " {input} {output}";
  spec.dim = 80;
  auto enc = LoadContentEncoder(spec);
  MelSpectrogram mel = RandomMel(21);
  ContentFeature f = ExtractContent(*enc, mel);
  CHECK(f.values.sizes() == torch::IntArrayRef({21, 80}));
  CHECK(torch::allclose(f.values, mel.values));

  spec.command = "false {input} {output}";
  auto broken = LoadContentEncoder(spec);
  try {
    ExtractContent(*broken, mel);
    FAIL("no error");
  } catch (const SigvcError &e) {
    CHECK(e.kind() == ErrorKind::kEncoderUnavailable);
  }
  CHECK(ExpandCommand("run {input} > {output} {input}", "a", "b") == "run a > b a");
}

TEST_CASE("pretrained toy encoders from the tiny setup load frozen") {
  const TinySetup &t = Tiny();
  auto s = ToySpeakerEncoder::Load(t.speaker_encoder);
  auto c = ToyContentEncoder::Load(t.content_encoder);
  CHECK(s->frozen());
  CHECK(c->frozen());
  std::vector<Utterance> data = LoadDataset(t.manifest, DspConfig{});
  CHECK(data.size() == 6);
  CHECK_FALSE(data[0].phone_labels.empty());
  CHECK(static_cast<int64_t>(data[0].phone_labels.size()) == data[0].mel.num_frames());
}
