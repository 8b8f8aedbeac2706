// tests/inference-test.cc

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
#include "sigvc/dsp/feature-io.h"
#include "sigvc/inference/convert.h"
#include "sigvc/inference/griffin-lim.h"
#include "sigvc/training/trainer.h"
#include "sigvc/util/error.h"

using namespace sigvc;
using namespace sigvc::testing;

namespace {

// Bin of the largest magnitude in the averaged spectrum of the middle frames.
int64_t PeakBin(const Waveform &w) {
  DspConfig cfg;
  torch::Tensor mag = StftMagnitude(torch::tensor(w.samples), cfg);
  const int64_t t = mag.size(0);
  return mag.slice(0, t / 4, 3 * t / 4).mean(0).argmax().item<int64_t>();
}

std::filesystem::path TrainedCheckpoint() {
  static TempDir dir("infer-train");
  static std::filesystem::path ckpt = Train(Tiny().Config(2), dir.path()).final_checkpoint;
  return ckpt;
}

}  // namespace

TEST_CASE("Griffin-Lim recovers a 440 Hz tone") {
  MelSpectrogram mel = ComputeMelSpectrogram(Tone(440, 16000));
  GriffinLimOptions opts;
  GriffinLimResult r = GriffinLim(mel, opts);
  CHECK(r.waveform.size() == (mel.num_frames() - 1) * 256);
  CHECK(r.waveform.sample_rate == 16000);
  const double bin_hz = 16000.0 / 1024;
  CHECK(std::abs(PeakBin(r.waveform) * bin_hz - 440.0) <= bin_hz);
  float peak = 0;
  for (float s : r.waveform.samples) peak = std::max(peak, std::abs(s));
  CHECK(peak <= 1.0f);
}

TEST_CASE("Griffin-Lim error does not increase with iterations") {
  MelSpectrogram mel = ComputeMelSpectrogram(Tone(300, 6000));
  GriffinLimOptions one, many;
  one.iterations = 1;
  many.iterations = 60;
  GriffinLimResult a = GriffinLim(mel, one), b = GriffinLim(mel, many);
  CHECK(b.spectral_error <= a.spectral_error);
  for (size_t i = 1; i < b.error_curve.size(); ++i)
    CHECK(b.error_curve[i] <= b.error_curve[i - 1] + 1e-9);
  GriffinLimOptions zero;
  zero.iterations = 0;
  CHECK_THROWS_AS(GriffinLim(mel, zero), SigvcError);
}

TEST_CASE("Mel inversion is non-negative and consistent") {
  DspConfig cfg;
  torch::Tensor mag = StftMagnitude(torch::tensor(Tone(700, 4000).samples), cfg).to(torch::kFloat64);
  torch::Tensor fb = MelFilterbank(cfg).to(torch::kFloat64);
  torch::Tensor mel = mag.mm(fb.t());
  torch::Tensor s = InvertMelFilterbank(mel, cfg, 200);
  CHECK(s.min().item<double>() >= 0.0);
  double rel = (s.mm(fb.t()) - mel).norm().item<double>() / mel.norm().item<double>();
  CHECK(rel < 0.05);
}

TEST_CASE("conversion keeps the frame count and writes the requested outputs") {
  const TinySetup &t = Tiny();
  std::filesystem::path ckpt = TrainedCheckpoint();
  TempDir out("conv");
  std::filesystem::path src = t.root / "corpus" / "wav" / "spk00_utt00.wav";
  std::filesystem::path tgt = t.root / "corpus" / "wav" / "spk01_utt01.wav";
  ConversionRequest req{src, {tgt}, ckpt, out / "none.mel", VocoderMode::kNone};
  ConversionResult r = Convert(req);
  Converter conv = Converter::FromCheckpoint(ckpt);
  MelSpectrogram src_mel = conv.LoadMel(src);
  CHECK(r.mel.num_frames() == src_mel.num_frames());
  CHECK(r.mel.num_bins() == 80);
  CHECK(std::filesystem::exists(out / "none.mel"));
  CHECK(std::filesystem::exists(out / "none.mel.json"));
  CHECK_FALSE(std::filesystem::exists(out / "none.wav"));
  MelSpectrogram back = ReadMel(out / "none.mel");
  CHECK(torch::equal(back.values, r.mel.values));

  ConversionResult again = Convert(req);
  CHECK(torch::equal(again.mel.values, r.mel.values));

  req.output = out / "gl.wav";
  req.vocoder = VocoderMode::kGriffinLim;
  ConversionResult g = Convert(req);
  REQUIRE(g.waveform.has_value());
  CHECK(std::filesystem::exists(out / "gl.wav"));
  CHECK(std::abs(g.waveform->size() - (r.mel.num_frames() - 1) * 256) <= 256);

  req.vocoder = VocoderMode::kExternal;
  RunConfig cfg = t.Config(2);
  cfg.Set("inference.external_vocoder_command", "cp {input} {output}");
  req.output = out / "ext.wav";
  Convert(req, &cfg);
  CHECK(std::filesystem::exists(out / "ext.wav"));
  cfg.Set("inference.external_vocoder_command", "exit 7");
  try {
    Convert(req, &cfg);
    FAIL("no error");
  } catch (const SigvcError &e) {
    CHECK(std::string(e.what()).find("7") != std::string::npos);
  }
}

TEST_CASE("conversion toward the source speaker and from several references") {
  std::filesystem::path ckpt = TrainedCheckpoint();
  Converter conv = Converter::FromCheckpoint(ckpt);
  MelSpectrogram a = RandomMel(30, 1), b = RandomMel(25, 2), c = RandomMel(40, 3);
  ConversionResult multi = conv.ConvertMel(a, std::vector<MelSpectrogram>{b, c});
  SpeakerEmbedding avg = AverageSpeakerEmbedding({conv.Embed(b), conv.Embed(c)});
  CHECK(torch::allclose(multi.target_speaker.values, avg.values));
  ConversionResult direct = conv.ConvertMel(a, avg);
  CHECK(torch::equal(direct.mel.values, multi.mel.values));
  try {
    conv.ConvertMel(RandomMel(1), avg);
    FAIL("no error");
  } catch (const SigvcError &e) {
    CHECK(e.kind() == ErrorKind::kTooShort);
  }
}

TEST_CASE("checkpoint mismatch with the runtime config is a config error") {
  std::filesystem::path ckpt = TrainedCheckpoint();
  RunConfig other = Tiny().Config(2);
  other.Set("model.heads", "4");
  try {
    Converter::FromCheckpoint(ckpt, &other);
    FAIL("no error");
  } catch (const SigvcError &e) {
    CHECK(e.kind() == ErrorKind::kConfigMismatch);
  }
}
