// include/prosokit/prosody.h

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

#ifndef PROSOKIT_PROSODY_H_
#define PROSOKIT_PROSODY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "prosokit/audio.h"
#include "prosokit/stft.h"

namespace prosokit::prosody {

struct RtisiConfig {
  int iterations_per_frame = 8;  // K
  int lookahead_frames = 3;      // L
  dsp::StftConfig stft;

  static RtisiConfig ForSampleRate(int sample_rate) {
    RtisiConfig c;
    c.stft = dsp::StftConfig::ForSampleRate(sample_rate);
    return c;
  }
  void Validate() const;
};

/// Speaking-rate factor. alpha > 1 speeds speech up; duration scales by
/// 1 / alpha.
struct TimeScaleSpec {
  double alpha = 1.0;
  void Validate() const;  // 0.25 <= alpha <= 4
};

/// Pitch-scale factor. s < 1 lowers the pitch.
struct PitchScaleSpec {
  double s = 1.0;
  void Validate() const;  // 0 < s <= 2
};

/// Real-time iterative spectrogram inversion with look-ahead.
///
/// Frames are committed strictly left to right. When frame m enters the
/// look-ahead buffer its phase is taken from the current partial
/// overlap-add reconstruction at that position (zero phase where the
/// reconstruction has no energy yet). Each step then runs
/// `iterations_per_frame` projections over the buffered frames
/// m - L .. m: re-analyze the partial signal, keep the phase, impose the
/// target magnitude, overlap-add the update. Frame m - L is then frozen.
///
/// The target's config supplies window, frame length, FFT size and the
/// synthesis hop; target.signal_length sets the output length. `seed` is
/// accepted for interface stability; initialization is deterministic.
dsp::AudioBuffer RtisiLa(const dsp::MagnitudeSpectrogram &target,
                         const RtisiConfig &config, std::uint64_t seed = 0);

/// Resamples the frame sequence so output frame t reads input position
/// t * alpha, interpolating linearly between neighbouring frames. The
/// result describes `output_length` samples at the same hop.
dsp::MagnitudeSpectrogram ResampleFrames(const dsp::MagnitudeSpectrogram &mag,
                                         double alpha,
                                         std::size_t output_length);

/// Frequency-axis mapping: output bin k takes the linearly interpolated
/// magnitude at input bin k / s; positions past Nyquist yield 0.
dsp::MagnitudeSpectrogram MapPitch(const dsp::MagnitudeSpectrogram &mag,
                                   double s);

/// Pitch-preserving duration change by 1 / alpha.
dsp::AudioBuffer TimeScale(const dsp::AudioBuffer &audio,
                           const TimeScaleSpec &spec,
                           const RtisiConfig &rtisi, std::uint64_t seed = 0);

/// Duration-preserving pitch change by s.
dsp::AudioBuffer PitchScale(const dsp::AudioBuffer &audio,
                            const PitchScaleSpec &spec,
                            const RtisiConfig &rtisi, std::uint64_t seed = 0);

enum class ModKind { kTimeScale, kPitchScale };

struct Variant {
  ModKind kind;
  double factor;

  /// Utterance-id suffix: "-sr110" for time scale 1.1, "-p085" for pitch
  /// scale 0.85.
  std::string Suffix() const;
  std::string KindName() const;
};

enum class RecipeName { kSR, kP, kSR_P, kSR2_P2 };

struct AugmentRecipe {
  RecipeName name;
  std::vector<Variant> variants;

  static AugmentRecipe Make(RecipeName name);
  /// Accepts "sr", "p", "sr-p", "sr2-p2" (case-insensitive, '_' ok).
  static AugmentRecipe Parse(const std::string &name);
  std::string Name() const;

  /// Output utterances per input utterance, including the original.
  std::size_t multiplier() const { return 1 + variants.size(); }
};

/// Applies one variant to one signal.
dsp::AudioBuffer ApplyVariant(const dsp::AudioBuffer &audio,
                              const Variant &variant,
                              const RtisiConfig &rtisi, std::uint64_t seed);

}  // namespace prosokit::prosody

#endif  // PROSOKIT_PROSODY_H_
