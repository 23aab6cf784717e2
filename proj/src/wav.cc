// src/wav.cc

// Copyright 2026  The prosokit Authors

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
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "prosokit/audio.h"
#include "prosokit/error.h"

namespace prosokit::dsp {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(const std::uint8_t *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const std::uint8_t *p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<std::uint8_t> &out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutU32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void PutTag(std::vector<std::uint8_t> &out, const char *tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct ParsedWav {
  WavInfo info;
  const std::uint8_t *data = nullptr;
  std::size_t data_bytes = 0;
};

ParsedWav ParseWav(const std::vector<std::uint8_t> &bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0)
    throw FormatError("wav: missing RIFF tag");
  if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw FormatError("wav: missing WAVE tag");

  ParsedWav parsed;
  bool have_fmt = false, have_data = false;
  std::uint16_t format = 0, block_align = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t *chunk = bytes.data() + pos;
    std::uint32_t size = ReadU32(chunk + 4);
    std::size_t body = pos + 8;
    std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available)
        throw FormatError("wav: truncated fmt chunk");
      const std::uint8_t *f = bytes.data() + body;
      format = ReadU16(f);
      parsed.info.channels = ReadU16(f + 2);
      parsed.info.sample_rate = static_cast<int>(ReadU32(f + 4));
      block_align = ReadU16(f + 12);
      parsed.info.bits_per_sample = ReadU16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40)
          throw FormatError("wav: truncated WAVE_FORMAT_EXTENSIBLE fmt chunk");
        // The first two bytes of the subformat GUID carry the format code.
        format = ReadU16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (size > available)
        throw FormatError("wav: data chunk size " + std::to_string(size) +
                          " exceeds file length");
      parsed.data = bytes.data() + body;
      parsed.data_bytes = size;
      have_data = true;
      break;
    } else if (size > available) {
      throw FormatError("wav: truncated chunk");
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) throw FormatError("wav: missing fmt chunk");
  if (!have_data) throw FormatError("wav: missing data chunk");
  if (format != kFormatPcm)
    throw UnsupportedFormatError("wav: unsupported audio_format " +
                                 std::to_string(format) + " (only PCM)");
  if (parsed.info.bits_per_sample != 16)
    throw UnsupportedFormatError(
        "wav: unsupported bits_per_sample " +
        std::to_string(parsed.info.bits_per_sample) + " (only 16)");
  if (parsed.info.channels < 1)
    throw FormatError("wav: channels must be positive");
  if (parsed.info.sample_rate <= 0)
    throw FormatError("wav: sample_rate must be positive");
  if (block_align != 2 * parsed.info.channels)
    throw FormatError("wav: block_align " + std::to_string(block_align) +
                      " inconsistent with channel count");
  parsed.info.frames = parsed.data_bytes / block_align;
  return parsed;
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

AudioBuffer::AudioBuffer(std::vector<double> s, int rate)
    : samples(std::move(s)), sample_rate(rate) {}

void AudioBuffer::Validate() const {
  if (sample_rate <= 0)
    throw ConfigError("audio: sample_rate must be positive");
  for (double v : samples)
    if (!std::isfinite(v)) throw FormatError("audio: non-finite sample");
}

AudioBuffer DecodeWav(const std::vector<std::uint8_t> &bytes) {
  ParsedWav parsed = ParseWav(bytes);
  const int channels = parsed.info.channels;
  AudioBuffer audio;
  audio.sample_rate = parsed.info.sample_rate;
  audio.source_channels = channels;
  audio.samples.resize(parsed.info.frames);
  const std::uint8_t *p = parsed.data;
  for (std::size_t i = 0; i < parsed.info.frames; ++i) {
    double sum = 0.0;
    for (int c = 0; c < channels; ++c, p += 2)
      sum += static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
    audio.samples[i] = sum / channels;
  }
  return audio;
}

WavInfo ReadWavInfo(const std::filesystem::path &path) {
  return ParseWav(ReadFileBytes(path)).info;
}

AudioBuffer ReadWav(const std::filesystem::path &path) {
  try {
    return DecodeWav(ReadFileBytes(path));
  } catch (const UnsupportedFormatError &e) {
    throw UnsupportedFormatError(path.string() + ": " + e.what());
  } catch (const FormatError &e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> EncodeWav(const AudioBuffer &audio) {
  if (audio.sample_rate <= 0)
    throw ConfigError("wav: sample_rate must be positive");
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(audio.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(audio.sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (double v : audio.samples) {
    if (!std::isfinite(v)) throw FormatError("wav: non-finite sample");
    double clamped = std::clamp(v, -1.0, 32767.0 / 32768.0);
    auto q = static_cast<std::int16_t>(std::lround(clamped * 32768.0));
    PutU16(out, static_cast<std::uint16_t>(q));
  }
  return out;
}

void WriteWav(const AudioBuffer &audio, const std::filesystem::path &path) {
  std::vector<std::uint8_t> bytes = EncodeWav(audio);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace prosokit::dsp
