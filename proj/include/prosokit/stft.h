// include/prosokit/stft.h

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

#ifndef PROSOKIT_STFT_H_
#define PROSOKIT_STFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "prosokit/audio.h"
#include "prosokit/matrix.h"

namespace prosokit::dsp {

enum class WindowType { kHann, kHamming, kRectangular };

WindowType ParseWindowType(const std::string &name);
std::string WindowTypeName(WindowType type);

/// Periodic window of the given length.
std::vector<double> MakeWindow(WindowType type, int length);

struct StftConfig {
  int frame_length = 512;
  int analysis_hop = 128;
  int synthesis_hop = 128;
  WindowType window = WindowType::kHann;
  int fft_size = 512;

  /// 32 ms Hann frames with an 8 ms hop, FFT size rounded up to a power of 2.
  static StftConfig ForSampleRate(int sample_rate);

  int num_bins() const { return fft_size / 2 + 1; }
  int pad() const { return frame_length / 2; }

  /// Throws ConfigError unless 0 < hop <= frame_length <= fft_size.
  void Validate() const;

  /// True when the squared window overlap-adds to a constant at this hop
  /// (max relative deviation <= 1e-6).
  bool IsCola(int hop) const;

  bool operator==(const StftConfig &) const = default;
};

struct ComplexSpectrogram {
  Matrix<std::complex<double>> frames;  // T x num_bins
  StftConfig config;
  int source_sample_rate = 16000;
  // Length in samples of the signal the frames describe; istft trims to it.
  std::size_t signal_length = 0;

  std::size_t num_frames() const { return frames.rows(); }
};

struct MagnitudeSpectrogram {
  Matrix<double> frames;  // T x num_bins, nonnegative
  StftConfig config;
  int source_sample_rate = 16000;
  std::size_t signal_length = 0;

  std::size_t num_frames() const { return frames.rows(); }
};

/// Phase reference is the frame center: a windowed frame of frame_length
/// samples is rotated so its middle sample lands on FFT index 0 (zero-phase
/// windowing). Unpack is the inverse rotation.
void PackFrame(std::span<const double> frame, std::span<double> fft_buffer);
void UnpackFrame(std::span<const double> fft_buffer, std::span<double> frame);

/// ceil(length / hop), the number of hop-centered frames covering a signal.
std::size_t NumFrames(std::size_t length, int hop);

/// Frame t is centered on sample t * analysis_hop; the signal is zero padded
/// by frame_length / 2 on both sides.
ComplexSpectrogram Stft(const AudioBuffer &audio, const StftConfig &config);

/// Weighted overlap-add at synthesis_hop, normalized by the summed squared
/// window. Throws ConfigError when the window/hop pair is not COLA.
AudioBuffer Istft(const ComplexSpectrogram &spec);

MagnitudeSpectrogram Magnitude(const ComplexSpectrogram &spec);

/// || |STFT(candidate)| - target ||_F / || target ||_F, with the STFT taken
/// under target.config. Throws DegenerateInputError for an all-zero target.
double SpectralConvergence(const MagnitudeSpectrogram &target,
                           const AudioBuffer &candidate);

/// Overlap-add accumulator shared by istft and the iterative reconstructors.
/// Positions are in padded coordinates: frame t starts at t * hop.
class OverlapAdd {
 public:
  OverlapAdd(const StftConfig &config, std::size_t num_frames, int hop);

  std::size_t num_frames() const { return num_frames_; }
  int hop() const { return hop_; }
  const std::vector<double> &window() const { return window_; }

  /// Adds weight * window * frame at frame position t. frame has
  /// frame_length samples.
  void Add(std::size_t t, std::span<const double> frame, double weight = 1.0);

  /// Normalized signal restricted to frame t's support (frame_length
  /// samples), i.e. accumulated / window_sum.
  void Segment(std::size_t t, std::span<double> out) const;

  /// Normalized signal with the padding removed, trimmed or zero-extended to
  /// `length` samples.
  std::vector<double> Signal(std::size_t length) const;

 private:
  double Normalized(std::size_t pos) const;

  int frame_length_;
  int hop_;
  std::size_t num_frames_;
  std::vector<double> window_;
  std::vector<double> accum_;
  std::vector<double> window_sum_;
  double floor_;
};

}  // namespace prosokit::dsp

#endif  // PROSOKIT_STFT_H_
