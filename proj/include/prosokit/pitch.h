// include/prosokit/pitch.h

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

#ifndef PROSOKIT_PITCH_H_
#define PROSOKIT_PITCH_H_

#include <optional>
#include <ostream>
#include <vector>

#include "prosokit/audio.h"

namespace prosokit::pitch {

struct PitchOptions {
  double f_min = 100.0;  // Hz; the default range suits child speech
  double f_max = 500.0;
  double frame_seconds = 0.025;
  double hop_seconds = 0.010;
  double voicing_threshold = 0.5;  // peak normalized autocorrelation
  double rms_threshold = 0.01;
};

struct PitchFrame {
  double time = 0.0;        // frame center, seconds
  std::optional<double> f0; // nullopt when unvoiced
};

class PitchTrack {
 public:
  PitchTrack() = default;
  explicit PitchTrack(std::vector<PitchFrame> frames);

  const std::vector<PitchFrame> &frames() const { return frames_; }
  bool empty() const { return frames_.empty(); }
  std::size_t num_voiced() const { return num_voiced_; }
  double voiced_fraction() const;
  bool has_voiced() const { return num_voiced_ > 0; }
  /// Throws DegenerateInputError when no frame is voiced.
  double mean_voiced_f0() const;

  /// CSV with header `time,f0,voiced`; unvoiced rows carry f0 = 0.
  void WriteCsv(std::ostream &out) const;

 private:
  std::vector<PitchFrame> frames_;
  std::size_t num_voiced_ = 0;
  double f0_sum_ = 0.0;
};

/// Autocorrelation tracker: normalized autocorrelation over lags
/// [rate / f_max, rate / f_min] per frame, the earliest peak within 10% of
/// the best one is taken (guards against period doubling), refined by
/// parabolic interpolation. The frame is at least two periods of f_min long.
PitchTrack TrackPitch(const dsp::AudioBuffer &audio,
                      const PitchOptions &options);
PitchTrack TrackPitch(const dsp::AudioBuffer &audio, double f_min,
                      double f_max);

}  // namespace prosokit::pitch

#endif  // PROSOKIT_PITCH_H_
