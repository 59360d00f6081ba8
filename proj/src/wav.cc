// src/wav.cc

// Copyright 2026  ernn-se authors

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

#include "ernn/wav.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace ernn {

namespace {

static_assert(std::endian::native == std::endian::little,
              "wav i/o assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;
// WAVE_FORMAT_EXTENSIBLE wraps the real codec in a sub-format GUID.
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

std::vector<double> load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError(WavErrorKind::io, "cannot open wav file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw WavError(WavErrorKind::format, "not a RIFF/WAVE file: " + path);

  std::uint16_t audio_format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;
  bool have_fmt = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t chunk_len = read_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_len > bytes.size())
      throw WavError(WavErrorKind::format, "truncated chunk in " + path);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw WavError(WavErrorKind::format, "short fmt chunk in " + path);
      audio_format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      if (audio_format == kFormatExtensible && chunk_len >= 40)
        audio_format = read_u16(bytes.data() + body + 24);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = chunk_len;
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr)
    throw WavError(WavErrorKind::format, "missing fmt/data chunk in " + path);
  if (channels != 1)
    throw WavError(WavErrorKind::channels,
                   path + ": expected mono, got " + std::to_string(channels) + " channels");
  if (rate != 16000)
    throw WavError(WavErrorKind::sample_rate,
                   path + ": expected 16000 Hz, got " + std::to_string(rate) + " Hz");

  std::vector<double> samples;
  if (audio_format == kFormatPcm && bits == 16) {
    const std::size_t n = data_len / 2;
    samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::int16_t v;
      std::memcpy(&v, data + 2 * i, 2);
      samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else if (audio_format == kFormatIeeeFloat && bits == 32) {
    const std::size_t n = data_len / 4;
    samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      float v;
      std::memcpy(&v, data + 4 * i, 4);
      samples[i] = static_cast<double>(v);
    }
  } else {
    throw WavError(WavErrorKind::format,
                   path + ": unsupported codec (format " + std::to_string(audio_format) +
                       ", " + std::to_string(bits) + " bit)");
  }
  return samples;
}

WavWriteStats write_wav(const std::string& path, const std::vector<double>& samples,
                        std::size_t sample_rate) {
  WavWriteStats stats;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw WavError(WavErrorKind::io, "cannot write wav file: " + path);

  const std::uint32_t data_len = static_cast<std::uint32_t>(samples.size() * 2);
  auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto put_u16 = [&](std::uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); };

  out.write("RIFF", 4);
  put_u32(36 + data_len);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_u32(16);
  put_u16(kFormatPcm);
  put_u16(1);
  put_u32(static_cast<std::uint32_t>(sample_rate));
  put_u32(static_cast<std::uint32_t>(sample_rate * 2));
  put_u16(2);
  put_u16(16);
  out.write("data", 4);
  put_u32(data_len);

  for (double v : samples) {
    if (v < -1.0) {
      v = -1.0;
      ++stats.clipped;
    } else if (v >= 1.0) {
      v = 32767.0 / 32768.0;
      ++stats.clipped;
    }
    long r = std::lrint(v * 32768.0);
    if (r > 32767) r = 32767;  // rounding can push the topmost code over
    if (r < -32768) r = -32768;
    const auto q = static_cast<std::int16_t>(r);
    out.write(reinterpret_cast<const char*>(&q), 2);
  }
  if (!out) throw WavError(WavErrorKind::io, "write failed: " + path);
  return stats;
}

}  // namespace ernn
