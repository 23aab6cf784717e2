// include/prosokit/audio.h

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

#ifndef PROSOKIT_AUDIO_H_
#define PROSOKIT_AUDIO_H_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace prosokit::dsp {

/// Mono time-domain signal. Samples are nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;
  // Channel count of the file this buffer was read from; anything above 1
  // means the samples are a downmix.
  int source_channels = 1;

  AudioBuffer() = default;
  AudioBuffer(std::vector<double> s, int rate);

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  bool downmixed() const { return source_channels > 1; }

  /// Throws ConfigError on a non-positive rate and FormatError on NaN/Inf.
  void Validate() const;
};

/// Header fields of a RIFF/WAVE file, without reading the sample data.
struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  int bits_per_sample = 0;
  std::uint64_t frames = 0;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(frames) / sample_rate : 0.0;
  }
};

WavInfo ReadWavInfo(const std::filesystem::path &path);

/// Reads 16-bit PCM. Multichannel files are averaged down to mono.
AudioBuffer ReadWav(const std::filesystem::path &path);

/// Writes 16-bit PCM mono. Values are clamped to [-1, 32767/32768].
void WriteWav(const AudioBuffer &audio, const std::filesystem::path &path);

/// Encodes to an in-memory WAV image (what WriteWav puts on disk).
std::vector<std::uint8_t> EncodeWav(const AudioBuffer &audio);
AudioBuffer DecodeWav(const std::vector<std::uint8_t> &bytes);

}  // namespace prosokit::dsp

#endif  // PROSOKIT_AUDIO_H_
