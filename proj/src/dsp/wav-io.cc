// src/dsp/wav-io.cc

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


#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "sigvc/dsp/audio.h"
#include "sigvc/util/error.h"

namespace sigvc {

namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T ReadLe(const char *p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

}  // namespace

WavData ReadWav(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) Fail(ErrorKind::kDecode, "cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    Fail(ErrorKind::kDecode, path.string() + " is not a RIFF/WAVE file");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const char *data = nullptr;
  size_t data_size = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char *id = bytes.data() + pos;
    size_t size = ReadLe<uint32_t>(id + 4);
    const char *body = id + 8;
    size_t avail = bytes.size() - pos - 8;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16 || avail < 16)
        Fail(ErrorKind::kDecode, "truncated fmt chunk in " + path.string());
      format = ReadLe<uint16_t>(body);
      channels = ReadLe<uint16_t>(body + 2);
      rate = ReadLe<uint32_t>(body + 4);
      bits = ReadLe<uint16_t>(body + 14);
      if (format == kFormatExtensible && size >= 26 && avail >= 26)
        format = ReadLe<uint16_t>(body + 24);
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = body;
      data_size = std::min(size, avail);
    }
    pos += 8 + size + (size & 1);
  }
  if (channels == 0 || rate == 0)
    Fail(ErrorKind::kDecode, "missing fmt chunk in " + path.string());
  if (data == nullptr)
    Fail(ErrorKind::kDecode, "missing data chunk in " + path.string());

  WavData out;
  out.sample_rate = static_cast<int>(rate);
  out.channels = channels;
  const size_t width = bits / 8;
  if (width == 0) Fail(ErrorKind::kDecode, "bad bit depth in " + path.string());
  const size_t n = data_size / width;
  out.interleaved.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const char *p = data + i * width;
    float v = 0.0f;
    if (format == kFormatPcm) {
      switch (bits) {
        case 8: v = (static_cast<uint8_t>(*p) - 128) / 128.0f; break;
        case 16: v = ReadLe<int16_t>(p) / 32768.0f; break;
        case 24: {
          int32_t s = (static_cast<uint8_t>(p[0])) |
                      (static_cast<uint8_t>(p[1]) << 8) |
                      (static_cast<int8_t>(p[2]) * 65536);
          v = s / 8388608.0f;
          break;
        }
        case 32: v = static_cast<float>(ReadLe<int32_t>(p) / 2147483648.0); break;
        default: Fail(ErrorKind::kDecode, "unsupported PCM depth " + std::to_string(bits));
      }
    } else if (format == kFormatFloat) {
      if (bits == 32) v = ReadLe<float>(p);
      else if (bits == 64) v = static_cast<float>(ReadLe<double>(p));
      else Fail(ErrorKind::kDecode, "unsupported float depth " + std::to_string(bits));
    } else {
      Fail(ErrorKind::kDecode, "unsupported WAV format tag " + std::to_string(format));
    }
    out.interleaved[i] = v;
  }
  out.interleaved.resize(n - n % channels);
  return out;
}

void WriteWav(const std::filesystem::path &path, const Waveform &wave) {
  std::ofstream os(path, std::ios::binary);
  if (!os) Fail(ErrorKind::kIo, "cannot write " + path.string());
  auto put32 = [&](uint32_t v) { os.write(reinterpret_cast<const char *>(&v), 4); };
  auto put16 = [&](uint16_t v) { os.write(reinterpret_cast<const char *>(&v), 2); };
  const uint32_t data_bytes = static_cast<uint32_t>(wave.samples.size() * 2);
  os.write("RIFF", 4);
  put32(36 + data_bytes);
  os.write("WAVEfmt ", 8);
  put32(16);
  put16(kFormatPcm);
  put16(1);
  put32(static_cast<uint32_t>(wave.sample_rate));
  put32(static_cast<uint32_t>(wave.sample_rate) * 2);
  put16(2);
  put16(16);
  os.write("data", 4);
  put32(data_bytes);
  for (float s : wave.samples) {
    float c = std::clamp(s, -1.0f, 1.0f);
    auto q = static_cast<int16_t>(std::lrint(c * 32767.0f));
    put16(static_cast<uint16_t>(q));
  }
  if (!os) Fail(ErrorKind::kIo, "short write to " + path.string());
}

Waveform LoadAndResample(const std::filesystem::path &path, int target_rate) {
  if (!std::filesystem::exists(path))
    Fail(ErrorKind::kDecode, "no such file " + path.string());
  WavData raw = ReadWav(path);
  const size_t frames = raw.interleaved.size() / raw.channels;
  if (frames == 0) Fail(ErrorKind::kEmptyInput, path.string() + " has no samples");
  Waveform mono;
  mono.sample_rate = raw.sample_rate;
  mono.samples.resize(frames);
  for (size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (int c = 0; c < raw.channels; ++c) acc += raw.interleaved[i * raw.channels + c];
    mono.samples[i] = static_cast<float>(acc / raw.channels);
  }
  Waveform out = Resample(mono, target_rate);
  float peak = 0.0f;
  for (float s : out.samples) {
    if (!std::isfinite(s)) Fail(ErrorKind::kDecode, "non-finite sample in " + path.string());
    peak = std::max(peak, std::abs(s));
  }
  if (peak > 1.0f)
    for (float &s : out.samples) s /= peak;
  return out;
}

}  // namespace sigvc
