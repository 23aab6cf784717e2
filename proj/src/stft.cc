// src/stft.cc

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

#include "prosokit/stft.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "prosokit/error.h"
#include "prosokit/fft.h"

namespace prosokit::dsp {

WindowType ParseWindowType(const std::string &name) {
  if (name == "hann") return WindowType::kHann;
  if (name == "hamming") return WindowType::kHamming;
  if (name == "rectangular" || name == "rect") return WindowType::kRectangular;
  throw ConfigError("unknown window type '" + name + "'");
}

std::string WindowTypeName(WindowType type) {
  switch (type) {
    case WindowType::kHann: return "hann";
    case WindowType::kHamming: return "hamming";
    case WindowType::kRectangular: return "rectangular";
  }
  return "unknown";
}

std::vector<double> MakeWindow(WindowType type, int length) {
  std::vector<double> w(length, 1.0);
  const double step = 2.0 * std::numbers::pi / length;
  for (int n = 0; n < length; ++n) {
    switch (type) {
      case WindowType::kHann: w[n] = 0.5 - 0.5 * std::cos(step * n); break;
      case WindowType::kHamming: w[n] = 0.54 - 0.46 * std::cos(step * n); break;
      case WindowType::kRectangular: break;
    }
  }
  return w;
}

StftConfig StftConfig::ForSampleRate(int sample_rate) {
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  StftConfig c;
  c.frame_length = static_cast<int>(std::lround(0.032 * sample_rate));
  c.analysis_hop = static_cast<int>(std::lround(0.008 * sample_rate));
  c.synthesis_hop = c.analysis_hop;
  c.window = WindowType::kHann;
  c.fft_size = 1;
  while (c.fft_size < c.frame_length) c.fft_size *= 2;
  return c;
}

void StftConfig::Validate() const {
  if (frame_length < 2) throw ConfigError("frame_length must be at least 2");
  if (analysis_hop <= 0 || analysis_hop > frame_length)
    throw ConfigError("analysis_hop must be in (0, frame_length]");
  if (synthesis_hop <= 0 || synthesis_hop > frame_length)
    throw ConfigError("synthesis_hop must be in (0, frame_length]");
  if (fft_size < frame_length)
    throw ConfigError("fft_size must be >= frame_length");
}

bool StftConfig::IsCola(int hop) const {
  if (hop <= 0 || hop > frame_length) return false;
  std::vector<double> w = MakeWindow(window, frame_length);
  std::vector<double> sum(hop, 0.0);
  for (int n = 0; n < frame_length; ++n) sum[n % hop] += w[n] * w[n];
  auto [lo, hi] = std::minmax_element(sum.begin(), sum.end());
  return *hi > 0.0 && (*hi - *lo) <= 1e-6 * *hi;
}

void PackFrame(std::span<const double> frame, std::span<double> fft_buffer) {
  const std::size_t n = frame.size();
  const std::size_t size = fft_buffer.size();
  const std::size_t half = n / 2;
  std::fill(fft_buffer.begin(), fft_buffer.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    fft_buffer[(i + size - half) % size] = frame[i];
}

void UnpackFrame(std::span<const double> fft_buffer, std::span<double> frame) {
  const std::size_t n = frame.size();
  const std::size_t size = fft_buffer.size();
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i)
    frame[i] = fft_buffer[(i + size - half) % size];
}

std::size_t NumFrames(std::size_t length, int hop) {
  return (length + hop - 1) / hop;
}

ComplexSpectrogram Stft(const AudioBuffer &audio, const StftConfig &config) {
  config.Validate();
  if (audio.empty()) throw DegenerateInputError("stft: empty audio");

  const int n = config.frame_length;
  const int pad = config.pad();
  const std::size_t num_frames = NumFrames(audio.size(), config.analysis_hop);
  const auto len = static_cast<std::ptrdiff_t>(audio.size());
  const std::vector<double> window = MakeWindow(config.window, n);
  RealFft fft(config.fft_size);

  ComplexSpectrogram spec;
  spec.frames =
      Matrix<std::complex<double>>(num_frames, config.num_bins());
  spec.config = config;
  spec.source_sample_rate = audio.sample_rate;
  spec.signal_length = audio.size();

  std::vector<double> frame(n), buf(config.fft_size);
  for (std::size_t t = 0; t < num_frames; ++t) {
    const auto start =
        static_cast<std::ptrdiff_t>(t) * config.analysis_hop - pad;
    for (int i = 0; i < n; ++i) {
      const std::ptrdiff_t idx = start + i;
      frame[i] = (idx >= 0 && idx < len) ? audio.samples[idx] * window[i] : 0.0;
    }
    PackFrame(frame, buf);
    fft.Forward(buf, spec.frames.row(t));
  }
  return spec;
}

AudioBuffer Istft(const ComplexSpectrogram &spec) {
  const StftConfig &config = spec.config;
  config.Validate();
  if (!config.IsCola(config.synthesis_hop))
    throw ConfigError("istft: " + WindowTypeName(config.window) +
                      " window of length " +
                      std::to_string(config.frame_length) +
                      " is not COLA at hop " +
                      std::to_string(config.synthesis_hop));
  if (spec.frames.cols() != static_cast<std::size_t>(config.num_bins()))
    throw ConfigError("istft: spectrogram width does not match fft_size");

  const std::size_t num_frames = spec.num_frames();
  OverlapAdd ola(config, num_frames, config.synthesis_hop);
  RealFft fft(config.fft_size);
  std::vector<double> buf(config.fft_size), frame(config.frame_length);
  for (std::size_t t = 0; t < num_frames; ++t) {
    fft.Inverse(spec.frames.row(t), buf);
    UnpackFrame(buf, frame);
    ola.Add(t, frame);
  }
  std::size_t length = spec.signal_length;
  if (length == 0) length = num_frames * config.synthesis_hop;
  return AudioBuffer(ola.Signal(length), spec.source_sample_rate);
}

MagnitudeSpectrogram Magnitude(const ComplexSpectrogram &spec) {
  MagnitudeSpectrogram mag;
  mag.frames = Matrix<double>(spec.frames.rows(), spec.frames.cols());
  auto in = spec.frames.data();
  auto out = mag.frames.data();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::abs(in[i]);
  mag.config = spec.config;
  mag.source_sample_rate = spec.source_sample_rate;
  mag.signal_length = spec.signal_length;
  return mag;
}

double SpectralConvergence(const MagnitudeSpectrogram &target,
                           const AudioBuffer &candidate) {
  double target_energy = 0.0;
  for (double v : target.frames.data()) target_energy += v * v;
  if (target_energy <= 0.0)
    throw DegenerateInputError(
        "spectral convergence: all-zero target has no defined ratio");

  StftConfig config = target.config;
  Matrix<double> cand;
  if (candidate.empty()) {
    cand = Matrix<double>(target.frames.rows(), target.frames.cols());
  } else {
    cand = Magnitude(Stft(candidate, config)).frames;
  }
  if (cand.rows() != target.frames.rows() ||
      cand.cols() != target.frames.cols())
    throw ConfigError("spectral convergence: candidate has " +
                      std::to_string(cand.rows()) + " frames, target has " +
                      std::to_string(target.frames.rows()));

  double diff_energy = 0.0;
  auto a = cand.data();
  auto b = target.frames.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    diff_energy += d * d;
  }
  return std::sqrt(diff_energy / target_energy);
}

OverlapAdd::OverlapAdd(const StftConfig &config, std::size_t num_frames,
                       int hop)
    : frame_length_(config.frame_length),
      hop_(hop),
      num_frames_(num_frames),
      window_(MakeWindow(config.window, config.frame_length)) {
  const std::size_t padded =
      num_frames == 0 ? 0 : (num_frames - 1) * hop + frame_length_;
  accum_.assign(padded, 0.0);
  window_sum_.assign(padded, 0.0);
  for (std::size_t t = 0; t < num_frames; ++t)
    for (int i = 0; i < frame_length_; ++i)
      window_sum_[t * hop + i] += window_[i] * window_[i];
  const double peak =
      window_sum_.empty()
          ? 0.0
          : *std::max_element(window_sum_.begin(), window_sum_.end());
  floor_ = 1e-10 * peak;
}

void OverlapAdd::Add(std::size_t t, std::span<const double> frame,
                     double weight) {
  double *dst = accum_.data() + t * hop_;
  for (int i = 0; i < frame_length_; ++i)
    dst[i] += weight * window_[i] * frame[i];
}

double OverlapAdd::Normalized(std::size_t pos) const {
  return window_sum_[pos] > floor_ ? accum_[pos] / window_sum_[pos] : 0.0;
}

void OverlapAdd::Segment(std::size_t t, std::span<double> out) const {
  const std::size_t start = t * hop_;
  for (int i = 0; i < frame_length_; ++i) out[i] = Normalized(start + i);
}

std::vector<double> OverlapAdd::Signal(std::size_t length) const {
  std::vector<double> out(length, 0.0);
  const std::size_t pad = frame_length_ / 2;
  for (std::size_t i = 0; i < length && i + pad < accum_.size(); ++i)
    out[i] = Normalized(i + pad);
  return out;
}

}  // namespace prosokit::dsp
