// src/dsp/toy-corpus.cc

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


#include "sigvc/dsp/toy-corpus.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "sigvc/util/error.h"

namespace sigvc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kFricative = 9;
constexpr int kBlock = 16;  // control-rate block, samples

// F1..F3 of the vowel phones 1..8.
constexpr std::array<std::array<double, 3>, 8> kVowels = {{
    {270, 2290, 3010},
    {530, 1840, 2480},
    {730, 1090, 2440},
    {570, 840, 2410},
    {300, 870, 2240},
    {500, 1500, 2500},
    {660, 1720, 2410},
    {640, 1190, 2390},
}};
constexpr std::array<double, 3> kBandwidths = {80, 110, 160};

// Distribution-free so the corpus is identical across standard libraries.
double Uniform(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
double Uniform(std::mt19937_64 &rng, double lo, double hi) {
  return lo + (hi - lo) * Uniform(rng);
}

std::vector<int> Permutation(int n, std::mt19937_64 &rng) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rng() % (i + 1)]);
  return p;
}

double Resonance(double f, double centre, double bandwidth) {
  double c2 = centre * centre;
  double d = c2 - f * f;
  return c2 / std::sqrt(d * d + bandwidth * bandwidth * f * f);
}

}  // namespace

std::vector<ToySpeaker> MakeToySpeakers(int num_speakers, uint64_t seed) {
  if (num_speakers <= 0) Fail(ErrorKind::kValidation, "num_speakers must be positive");
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 1);
  // Stratify pitch and formant scale so speakers stay separable.
  std::vector<int> pitch_rank = Permutation(num_speakers, rng);
  std::vector<int> tract_rank = Permutation(num_speakers, rng);
  std::vector<ToySpeaker> out(num_speakers);
  for (int i = 0; i < num_speakers; ++i) {
    ToySpeaker &s = out[i];
    double u = (pitch_rank[i] + Uniform(rng, 0.2, 0.8)) / num_speakers;
    s.f0 = 90.0 * std::pow(2.6, u);
    double v = (tract_rank[i] + Uniform(rng, 0.2, 0.8)) / num_speakers;
    s.formant_scale = 0.82 + 0.40 * v;
    s.tilt = Uniform(rng, 0.7, 1.8);
    s.breath = Uniform(rng, 0.003, 0.03);
    s.extra_resonance_hz = Uniform(rng, 2600.0, 3900.0);
  }
  return out;
}

ToyScript MakeToyScript(int index, double duration, uint64_t seed) {
  std::mt19937_64 rng((seed + 0x51ED) * 1000003ULL + static_cast<uint64_t>(index));
  ToyScript script;
  script.duration = duration;
  script.pitch_rate = Uniform(rng, 0.5, 2.0);
  script.pitch_phase = Uniform(rng, 0.0, kTwoPi);
  double t = 0.0;
  int prev = -1;
  while (t < duration) {
    double r = Uniform(rng);
    int phone;
    double len;
    bool edge = t < 0.05 || duration - t < 0.3;
    if (r < 0.1 && !edge && prev != 0) {
      phone = 0;
      len = Uniform(rng, 0.05, 0.1);
    } else if (r < 0.25 && prev != kFricative) {
      phone = kFricative;
      len = Uniform(rng, 0.07, 0.14);
    } else {
      do {
        phone = 1 + static_cast<int>(rng() % kVowels.size());
      } while (phone == prev);
      len = Uniform(rng, 0.09, 0.22);
    }
    double end = std::min(duration, t + len);
    if (duration - end < 0.05) end = duration;
    script.phones.push_back({t, end, phone});
    t = end;
    prev = phone;
  }
  return script;
}

Waveform SynthesizeToyUtterance(const ToySpeaker &speaker, const ToyScript &script,
                                int sample_rate, double pad_seconds, uint64_t noise_seed,
                                std::vector<PhoneSegment> *labels) {
  std::mt19937_64 rng(noise_seed);
  const int64_t n = static_cast<int64_t>(std::llround(script.duration * sample_rate));
  const double nyquist_guard = 0.475 * sample_rate;
  std::vector<double> speech(n, 0.0);

  // Control state, smoothed with one-pole filters for coarticulation.
  std::array<double, 3> formants = {500, 1500, 2500};
  double voice_gain = 0.0, fric_gain = 0.0;
  const double a_formant = std::exp(-1.0 * kBlock / (0.020 * sample_rate));
  const double a_gain = std::exp(-1.0 * kBlock / (0.008 * sample_rate));
  double phase = 0.0;
  // Two-pole band-pass for frication noise.
  const double fc = std::min(4300.0 * speaker.formant_scale, 0.42 * sample_rate);
  const double rad = std::exp(-std::numbers::pi * 1500.0 / sample_rate);
  const double b1 = 2.0 * rad * std::cos(kTwoPi * fc / sample_rate), b2 = -rad * rad;
  double y1 = 0.0, y2 = 0.0;
  size_t seg = 0;
  std::vector<double> amps;

  for (int64_t start = 0; start < n; start += kBlock) {
    const double t = static_cast<double>(start) / sample_rate;
    while (seg + 1 < script.phones.size() && t >= script.phones[seg].end) ++seg;
    const int phone = script.phones[seg].phone;
    double target_voice = (phone >= 1 && phone <= 8) ? 1.0 : 0.0;
    double target_fric = phone == kFricative ? 1.0 : 0.0;
    if (phone >= 1 && phone <= 8)
      for (int k = 0; k < 3; ++k)
        formants[k] = a_formant * formants[k] +
                      (1.0 - a_formant) * kVowels[phone - 1][k] * speaker.formant_scale;
    voice_gain = a_gain * voice_gain + (1.0 - a_gain) * target_voice;
    fric_gain = a_gain * fric_gain + (1.0 - a_gain) * target_fric;

    const double progress = t / script.duration;
    const double f0 = speaker.f0 * (1.0 + 0.12 * std::sin(kTwoPi * script.pitch_rate * progress +
                                                          script.pitch_phase) -
                                    0.10 * progress);
    const int harmonics = static_cast<int>(nyquist_guard / f0);
    amps.assign(harmonics, 0.0);
    for (int h = 1; h <= harmonics; ++h) {
      double f = h * f0;
      double a = std::pow(static_cast<double>(h), -speaker.tilt);
      for (int k = 0; k < 3; ++k) a *= Resonance(f, formants[k], kBandwidths[k]);
      a *= 1.0 + 0.8 * Resonance(f, speaker.extra_resonance_hz, 300.0) / 10.0;
      amps[h - 1] = a * voice_gain;
    }
    const int64_t stop = std::min(n, start + kBlock);
    for (int64_t i = start; i < stop; ++i) {
      phase += kTwoPi * f0 / sample_rate;
      if (phase > kTwoPi) phase -= kTwoPi;
      double v = 0.0;
      for (int h = 0; h < harmonics; ++h) v += amps[h] * std::sin((h + 1) * phase);
      double white = Uniform(rng, -1.0, 1.0);
      double y = white + b1 * y1 + b2 * y2;
      y2 = y1;
      y1 = y;
      speech[i] = 0.02 * v + speaker.breath * white * voice_gain + 0.05 * fric_gain * y;
    }
  }

  double peak = 0.0;
  for (double s : speech) peak = std::max(peak, std::abs(s));
  const int64_t pad = static_cast<int64_t>(std::llround(pad_seconds * sample_rate));
  Waveform out;
  out.sample_rate = sample_rate;
  out.samples.assign(n + 2 * pad, 0.0f);
  for (int64_t i = 0; i < n; ++i)
    out.samples[pad + i] = static_cast<float>(peak > 0 ? 0.8 * speech[i] / peak : 0.0);

  if (labels) {
    if (pad_seconds > 0) labels->push_back({0.0, pad_seconds, 0});
    for (const auto &p : script.phones)
      labels->push_back({p.start + pad_seconds, p.end + pad_seconds, p.phone});
    if (pad_seconds > 0)
      labels->push_back({pad_seconds + script.duration, 2 * pad_seconds + script.duration, 0});
  }
  return out;
}

std::filesystem::path MakeToyCorpus(const std::filesystem::path &out_dir,
                                    const ToyCorpusOptions &opts) {
  if (opts.num_speakers <= 0)
    Fail(ErrorKind::kValidation, "num_speakers must be at least 1");
  if (opts.utts_per_speaker <= 0)
    Fail(ErrorKind::kValidation, "utts_per_speaker must be at least 1");
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "wav", ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create " + (out_dir / "wav").string());

  std::vector<ToySpeaker> speakers = MakeToySpeakers(opts.num_speakers, opts.seed);
  std::vector<ManifestEntry> entries;
  for (int u = 0; u < opts.utts_per_speaker; ++u) {
    ToyScript script = MakeToyScript(u, opts.speech_seconds, opts.seed);
    for (int s = 0; s < opts.num_speakers; ++s) {
      char name[64];
      std::snprintf(name, sizeof(name), "spk%02d_utt%02d", s, u);
      ManifestEntry e;
      e.utterance_id = name;
      std::snprintf(name, sizeof(name), "spk%02d", s);
      e.speaker_id = name;
      e.wav_path = std::filesystem::path("wav") / (e.utterance_id + ".wav");
      uint64_t noise_seed = opts.seed * 7919 + static_cast<uint64_t>(s) * 104729 + u;
      Waveform w = SynthesizeToyUtterance(speakers[s], script, opts.sample_rate,
                                          opts.pad_seconds, noise_seed, &e.phones);
      WriteWav(out_dir / e.wav_path, w);
      entries.push_back(std::move(e));
    }
  }
  std::sort(entries.begin(), entries.end(), [](const auto &a, const auto &b) {
    return a.utterance_id < b.utterance_id;
  });
  auto manifest = out_dir / "manifest.json";
  WriteManifest(manifest, entries);
  return manifest;
}

std::vector<int64_t> PhoneLabelsForFrames(const std::vector<PhoneSegment> &phones,
                                          int64_t num_frames, int hop_length,
                                          int sample_rate, int64_t offset_samples) {
  std::vector<int64_t> out(num_frames, 0);
  size_t seg = 0;
  for (int64_t t = 0; t < num_frames; ++t) {
    double time = static_cast<double>(t * hop_length + offset_samples) / sample_rate;
    while (seg < phones.size() && time >= phones[seg].end) ++seg;
    if (seg < phones.size() && time >= phones[seg].start) out[t] = phones[seg].phone;
  }
  return out;
}

}  // namespace sigvc
