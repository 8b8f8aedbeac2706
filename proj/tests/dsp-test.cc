// tests/dsp-test.cc

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


#include <cmath>
#include <fstream>
#include <random>

#include "test-doctest.h"
#include "sigvc/dsp/audio.h"
#include "sigvc/dsp/feature-io.h"
#include "sigvc/dsp/toy-corpus.h"
#include "sigvc/util/error.h"
#include "sigvc/util/hash.h"
#include "test-util.h"

using namespace sigvc;
using namespace sigvc::testing;

namespace {

double SlaneyMel(double hz) {
  const double f_sp = 200.0 / 3, min_log_hz = 1000.0, min_log_mel = min_log_hz / f_sp;
  const double logstep = std::log(6.4) / 27.0;
  return hz < min_log_hz ? hz / f_sp : min_log_mel + std::log(hz / min_log_hz) / logstep;
}

double SlaneyHz(double mel) {
  const double f_sp = 200.0 / 3, min_log_hz = 1000.0, min_log_mel = min_log_hz / f_sp;
  const double logstep = std::log(6.4) / 27.0;
  return mel < min_log_mel ? mel * f_sp : min_log_hz * std::exp(logstep * (mel - min_log_mel));
}

// Triangle weights written out term by term.
double FilterWeight(int m, int k, const DspConfig &cfg) {
  const double lo = SlaneyMel(cfg.fmin), hi = SlaneyMel(cfg.fmax);
  auto edge = [&](int i) { return SlaneyHz(lo + (hi - lo) * i / (cfg.n_mels + 1)); };
  const double f = static_cast<double>(k) * cfg.sample_rate / cfg.n_fft;
  const double left = edge(m), centre = edge(m + 1), right = edge(m + 2);
  double w = std::max(0.0, std::min((f - left) / (centre - left), (right - f) / (right - centre)));
  return w * 2.0 / (right - left);
}

void WriteRawWav(const std::filesystem::path &p, int sr, int channels,
                 const std::vector<int16_t> &interleaved) {
  std::ofstream os(p, std::ios::binary);
  auto u32 = [&](uint32_t v) { os.write(reinterpret_cast<const char *>(&v), 4); };
  auto u16 = [&](uint16_t v) { os.write(reinterpret_cast<const char *>(&v), 2); };
  uint32_t data_bytes = interleaved.size() * 2;
  os.write("RIFF", 4);
  u32(36 + data_bytes);
  os.write("WAVEfmt ", 8);
  u32(16);
  u16(1);
  u16(channels);
  u32(sr);
  u32(sr * channels * 2);
  u16(channels * 2);
  u16(16);
  os.write("data", 4);
  u32(data_bytes);
  os.write(reinterpret_cast<const char *>(interleaved.data()), data_bytes);
}

}  // namespace

TEST_CASE("mel frame count follows floor(n / hop) + 1") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int64_t> len(1, 40000);
  for (int i = 0; i < 20; ++i) {
    int64_t n = len(rng);
    MelSpectrogram m = ComputeMelSpectrogram(Tone(300, n));
    CHECK(m.num_frames() == n / 256 + 1);
    CHECK(m.num_bins() == 80);
  }
  CHECK(ComputeMelSpectrogram(Tone(300, 16000)).num_frames() == 63);
  CHECK(ComputeMelSpectrogram(Tone(300, 256)).num_frames() == 2);
  CHECK(ComputeMelSpectrogram(Tone(300, 1)).num_frames() == 1);
}

TEST_CASE("zero input maps to the log floor everywhere") {
  Waveform w;
  w.sample_rate = 16000;
  w.samples.assign(16000, 0.0f);
  MelSpectrogram m = ComputeMelSpectrogram(w);
  CHECK(m.values.eq(static_cast<float>(std::log(1e-5))).all().item<bool>());
}

TEST_CASE("wrong sample rate is a config mismatch") {
  try {
    ComputeMelSpectrogram(Tone(300, 1000, 22050));
    FAIL("no error");
  } catch (const SigvcError &e) {
    CHECK(e.kind() == ErrorKind::kConfigMismatch);
  }
}

TEST_CASE("filterbank matches the Slaney construction") {
  DspConfig cfg;
  torch::Tensor fb = MelFilterbank(cfg).to(torch::kFloat64);
  REQUIRE(fb.size(0) == 80);
  REQUIRE(fb.size(1) == 513);
  auto a = fb.accessor<double, 2>();
  double worst = 0;
  for (int m = 0; m < 80; ++m)
    for (int k = 0; k < 513; ++k) worst = std::max(worst, std::abs(a[m][k] - FilterWeight(m, k, cfg)));
  CHECK(worst < 1e-6);
}

TEST_CASE("STFT magnitude peaks at the tone bin") {
  DspConfig cfg;
  torch::Tensor mag = StftMagnitude(torch::tensor(Tone(1000, 8000).samples), cfg);
  CHECK(mag.size(0) == 8000 / 256 + 1);
  torch::Tensor peak = mag.slice(0, 4, 20).argmax(1);
  CHECK(peak.eq(64).all().item<bool>());  // 1000 Hz / 15.625 Hz
}

TEST_CASE("mel extraction is deterministic") {
  Waveform w = Tone(220, 12345);
  MelSpectrogram a = ComputeMelSpectrogram(w), b = ComputeMelSpectrogram(w);
  CHECK(torch::equal(a.values, b.values));
  CHECK(torch::isfinite(a.values).all().item<bool>());
}

TEST_CASE("resampled length and pitch") {
  CHECK(ResampledLength(48000, 48000, 16000) == 16000);
  CHECK(ResampledLength(44100, 44100, 16000) == 16000);
  CHECK(ResampledLength(1001, 48000, 16000) == 334);
  Waveform w48 = Tone(440, 48000, 48000);
  Waveform w16 = Resample(w48, 16000);
  CHECK(w16.sample_rate == 16000);
  CHECK(std::abs(w16.size() - 16000) <= 1);
  // Compare with a tone synthesised directly at 16 kHz, away from the edges.
  Waveform ref = Tone(440, 16000);
  double err = 0;
  for (int i = 1000; i < 15000; ++i) err = std::max(err, double(std::abs(w16.samples[i] - ref.samples[i])));
  CHECK(err < 1e-2);
  Waveform same = Resample(ref, 16000);
  CHECK(same.samples == ref.samples);
}

TEST_CASE("load averages channels and resamples") {
  TempDir dir("wav");
  std::vector<int16_t> stereo;
  for (int i = 0; i < 48000; ++i) {
    stereo.push_back(static_cast<int16_t>(8000 * std::sin(2 * M_PI * 440 * i / 48000.0)));
    stereo.push_back(static_cast<int16_t>(-2000));
  }
  WriteRawWav(dir / "s.wav", 48000, 2, stereo);
  Waveform w = LoadAndResample(dir / "s.wav");
  CHECK(w.sample_rate == 16000);
  CHECK(std::abs(w.size() - 16000) <= 1);
  double mean = 0;
  for (float s : w.samples) mean += s;
  mean /= w.size();
  CHECK(mean == doctest::Approx(-1000.0 / 32768).epsilon(0.05));

  WriteRawWav(dir / "empty.wav", 16000, 1, {});
  try {
    LoadAndResample(dir / "empty.wav");
    FAIL("no error");
  } catch (const SigvcError &e) {
    CHECK(e.kind() == ErrorKind::kEmptyInput);
  }
  std::ofstream(dir / "junk.wav") << "not audio";
  try {
    LoadAndResample(dir / "junk.wav");
    FAIL("no error");
  } catch (const SigvcError &e) {
    CHECK(e.kind() == ErrorKind::kDecode);
  }
}

TEST_CASE("wav round trip at 16 bits") {
  TempDir dir("wav");
  Waveform w = Tone(440, 4000);
  WriteWav(dir / "t.wav", w);
  Waveform r = LoadAndResample(dir / "t.wav");
  REQUIRE(r.size() == w.size());
  for (int64_t i = 0; i < w.size(); ++i) CHECK(std::abs(r.samples[i] - w.samples[i]) < 1.0 / 32768 + 1e-6);
}

TEST_CASE("trim removes silence and is idempotent") {
  Waveform tone = Tone(440, 16000, 16000, 1.0);
  TrimResult same = TrimSilence(tone);
  CHECK(same.waveform.samples == tone.samples);
  CHECK_FALSE(same.all_silent);

  Waveform padded;
  padded.sample_rate = 16000;
  padded.samples.assign(8000, 0.0f);
  padded.samples.insert(padded.samples.end(), tone.samples.begin(), tone.samples.end());
  padded.samples.insert(padded.samples.end(), 8000, 0.0f);
  TrimResult t = TrimSilence(padded);
  CHECK(std::abs(t.waveform.size() - 16000) <= 1024);
  CHECK(std::abs(t.start_sample - 8000) <= 1024);
  TrimResult again = TrimSilence(t.waveform);
  CHECK(again.waveform.samples == t.waveform.samples);

  Waveform zeros;
  zeros.sample_rate = 16000;
  zeros.samples.assign(5000, 0.0f);
  TrimResult z = TrimSilence(zeros);
  CHECK(z.all_silent);
  CHECK(z.waveform.samples == zeros.samples);
}

TEST_CASE("trim idempotence on random bursts") {
  std::mt19937_64 rng(5);
  std::normal_distribution<float> g(0, 1);
  std::uniform_int_distribution<int> len(500, 20000);
  for (int trial = 0; trial < 10; ++trial) {
    Waveform w;
    w.sample_rate = 16000;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
      float env = std::exp(-std::pow((i - n / 2.0) / (n / 6.0), 2.0));
      w.samples.push_back(env * g(rng));
    }
    TrimResult a = TrimSilence(w);
    TrimResult b = TrimSilence(a.waveform);
    CHECK(a.waveform.samples == b.waveform.samples);
  }
}

TEST_CASE("feature files round trip bit-exactly") {
  TempDir dir("feat");
  torch::Tensor v = torch::randn({17, 80});
  v[3][5] = -0.0f;
  v[4][6] = std::numeric_limits<float>::denorm_min();
  MelSpectrogram m;
  m.values = v;
  m.sample_rate = 16000;
  m.hop_length = 256;
  m.win_length = 1024;
  WriteMel(dir / "x.mel", m);
  MelSpectrogram r = ReadMel(dir / "x.mel");
  REQUIRE(r.values.sizes() == v.sizes());
  CHECK(std::memcmp(r.values.data_ptr<float>(), v.data_ptr<float>(), v.numel() * 4) == 0);
  FeatureFile f = ReadFeatureFile(dir / "x.mel");
  CHECK(f.sidecar["num_frames"] == 17);
  CHECK(f.sidecar["num_bins"] == 80);
  CHECK(f.sidecar["hop_length"] == 256);
  CHECK(std::filesystem::file_size(dir / "x.mel") == 17 * 80 * 4);
}

TEST_CASE("toy corpus is deterministic and well formed") {
  TempDir a("toy"), b("toy");
  ToyCorpusOptions opts;
  opts.num_speakers = 2;
  opts.utts_per_speaker = 2;
  opts.seed = 1;
  opts.speech_seconds = 0.5;
  auto ma = MakeToyCorpus(a.path(), opts);
  auto mb = MakeToyCorpus(b.path(), opts);
  int wavs = 0;
  for (const auto &e : std::filesystem::directory_iterator(a.path() / "wav")) {
    ++wavs;
    std::ifstream fa(e.path(), std::ios::binary), fb(b.path() / "wav" / e.path().filename(), std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
    CHECK(Sha256Hex(sa) == Sha256Hex(sb));
    WavData d = ReadWav(e.path());
    CHECK(d.sample_rate == 16000);
    CHECK(d.channels == 1);
  }
  CHECK(wavs == 4);
  std::ifstream fa(ma), fb(mb);
  std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
  CHECK(sa == sb);

  opts.num_speakers = 0;
  CHECK_THROWS_AS(MakeToyCorpus(a.path() / "x", opts), SigvcError);
}

TEST_CASE("phone labels follow frame centres") {
  std::vector<PhoneSegment> phones = {{0.0, 0.1, 3}, {0.1, 0.2, 5}};
  auto labels = PhoneLabelsForFrames(phones, 14, 256, 16000, 0);
  REQUIRE(labels.size() == 14);
  CHECK(labels[0] == 3);   // centre at 0 s
  CHECK(labels[6] == 3);   // 0.096 s
  CHECK(labels[7] == 5);   // 0.112 s
  CHECK(labels[13] == 0);  // 0.208 s, past the last segment
}
