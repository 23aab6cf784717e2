// src/prosody.cc

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

#include "prosokit/prosody.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <deque>

#include "prosokit/error.h"
#include "prosokit/fft.h"

namespace prosokit::prosody {

using dsp::AudioBuffer;
using dsp::MagnitudeSpectrogram;
using dsp::StftConfig;

void RtisiConfig::Validate() const {
  if (iterations_per_frame < 1)
    throw ConfigError("rtisi: iterations_per_frame must be >= 1");
  if (lookahead_frames < 0)
    throw ConfigError("rtisi: lookahead_frames must be >= 0");
  stft.Validate();
}

void TimeScaleSpec::Validate() const {
  if (!(alpha >= 0.25 && alpha <= 4.0))
    throw ConfigError("time scale: alpha must be in [0.25, 4]");
}

void PitchScaleSpec::Validate() const {
  if (!(s > 0.0 && s <= 2.0))
    throw ConfigError("pitch scale: s must be in (0, 2]");
}

namespace {

// One frame of the look-ahead buffer: its index and the time-domain frame
// (before the synthesis window) currently overlap-added for it.
struct BufferedFrame {
  std::size_t index;
  std::vector<double> samples;
};

class Projector {
 public:
  Projector(const MagnitudeSpectrogram &target)
      : target_(target),
        fft_(target.config.fft_size),
        window_(dsp::MakeWindow(target.config.window,
                                target.config.frame_length)),
        segment_(target.config.frame_length),
        buffer_(target.config.fft_size),
        spectrum_(target.config.num_bins()) {}

  // Analyzes the current reconstruction at frame t, imposes the target
  // magnitude on the estimated phase and writes the resynthesized frame.
  void Project(const dsp::OverlapAdd &ola, std::size_t t,
               std::span<double> out) {
    ola.Segment(t, segment_);
    for (std::size_t i = 0; i < segment_.size(); ++i) segment_[i] *= window_[i];
    dsp::PackFrame(segment_, buffer_);
    fft_.Forward(buffer_, spectrum_);

    const auto mag = target_.frames.row(t);
    double scale = 0.0;
    for (const auto &c : spectrum_) scale = std::max(scale, std::abs(c));
    const double tiny = 1e-12 * std::max(scale, 1e-300);
    for (std::size_t k = 0; k < spectrum_.size(); ++k) {
      const double a = std::abs(spectrum_[k]);
      spectrum_[k] = (scale > 0.0 && a > tiny) ? spectrum_[k] * (mag[k] / a)
                                               : std::complex<double>(mag[k]);
    }
    fft_.Inverse(spectrum_, buffer_);
    dsp::UnpackFrame(buffer_, out);
  }

 private:
  const MagnitudeSpectrogram &target_;
  dsp::RealFft fft_;
  std::vector<double> window_;
  std::vector<double> segment_;
  std::vector<double> buffer_;
  std::vector<std::complex<double>> spectrum_;
};

void CheckMagnitudes(const MagnitudeSpectrogram &target) {
  target.config.Validate();
  if (target.frames.cols() !=
      static_cast<std::size_t>(target.config.num_bins()))
    throw ConfigError("rtisi: spectrogram width does not match fft_size");
  for (double v : target.frames.data())
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ConfigError("rtisi: target magnitudes must be finite and >= 0");
}

}  // namespace

AudioBuffer RtisiLa(const MagnitudeSpectrogram &target,
                    const RtisiConfig &config, std::uint64_t /*seed*/) {
  config.Validate();
  CheckMagnitudes(target);
  const StftConfig &stft = target.config;
  if (!stft.IsCola(stft.synthesis_hop))
    throw ConfigError("rtisi: window is not COLA at synthesis hop " +
                      std::to_string(stft.synthesis_hop));

  const std::size_t num_frames = target.num_frames();
  std::size_t length = target.signal_length;
  if (length == 0) length = num_frames * stft.synthesis_hop;

  dsp::OverlapAdd ola(stft, num_frames, stft.synthesis_hop);
  Projector projector(target);
  std::vector<double> update(stft.frame_length);
  std::deque<BufferedFrame> active;
  const std::size_t lookahead = config.lookahead_frames;

  for (std::size_t m = 0; m < num_frames + lookahead; ++m) {
    if (m < num_frames) {
      BufferedFrame fresh{m, std::vector<double>(stft.frame_length)};
      projector.Project(ola, m, fresh.samples);
      ola.Add(m, fresh.samples);
      active.push_back(std::move(fresh));
    }
    for (int it = 0; it < config.iterations_per_frame; ++it) {
      for (BufferedFrame &frame : active) {
        projector.Project(ola, frame.index, update);
        ola.Add(frame.index, frame.samples, -1.0);
        ola.Add(frame.index, update);
        frame.samples.swap(update);
      }
    }
    if (m >= lookahead && !active.empty()) active.pop_front();
  }
  return AudioBuffer(ola.Signal(length), target.source_sample_rate);
}

MagnitudeSpectrogram ResampleFrames(const MagnitudeSpectrogram &mag,
                                    double alpha, std::size_t output_length) {
  if (mag.num_frames() == 0)
    throw DegenerateInputError("time scale: empty spectrogram");
  const std::size_t in_frames = mag.num_frames();
  const std::size_t bins = mag.frames.cols();
  const std::size_t out_frames =
      dsp::NumFrames(output_length, mag.config.synthesis_hop);

  MagnitudeSpectrogram out;
  out.frames = Matrix<double>(out_frames, bins);
  out.config = mag.config;
  out.source_sample_rate = mag.source_sample_rate;
  out.signal_length = output_length;
  for (std::size_t t = 0; t < out_frames; ++t) {
    const double pos = static_cast<double>(t) * alpha;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    auto dst = out.frames.row(t);
    if (lo + 1 >= in_frames) {
      auto src = mag.frames.row(in_frames - 1);
      std::copy(src.begin(), src.end(), dst.begin());
      continue;
    }
    const double frac = pos - static_cast<double>(lo);
    auto a = mag.frames.row(lo);
    auto b = mag.frames.row(lo + 1);
    for (std::size_t k = 0; k < bins; ++k)
      dst[k] = (1.0 - frac) * a[k] + frac * b[k];
  }
  return out;
}

MagnitudeSpectrogram MapPitch(const MagnitudeSpectrogram &mag, double s) {
  if (!(s > 0.0)) throw ConfigError("pitch scale: s must be positive");
  MagnitudeSpectrogram out = mag;
  const std::size_t bins = mag.frames.cols();
  if (s == 1.0 || bins == 0) return out;
  const double nyquist = static_cast<double>(bins - 1);
  for (std::size_t t = 0; t < mag.num_frames(); ++t) {
    auto src = mag.frames.row(t);
    auto dst = out.frames.row(t);
    for (std::size_t k = 0; k < bins; ++k) {
      const double pos = static_cast<double>(k) / s;
      if (pos > nyquist) {
        dst[k] = 0.0;
        continue;
      }
      const auto lo = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(lo);
      dst[k] = lo + 1 < bins ? (1.0 - frac) * src[lo] + frac * src[lo + 1]
                             : src[lo];
    }
  }
  return out;
}

namespace {

StftConfig AnalysisConfig(const RtisiConfig &rtisi) {
  StftConfig stft = rtisi.stft;
  stft.synthesis_hop = stft.analysis_hop;
  return stft;
}

bool HasEnergy(const MagnitudeSpectrogram &mag) {
  return std::any_of(mag.frames.data().begin(), mag.frames.data().end(),
                     [](double v) { return v > 0.0; });
}

}  // namespace

AudioBuffer TimeScale(const AudioBuffer &audio, const TimeScaleSpec &spec,
                      const RtisiConfig &rtisi, std::uint64_t seed) {
  spec.Validate();
  rtisi.Validate();
  if (audio.empty()) throw DegenerateInputError("time scale: empty audio");
  const StftConfig stft = AnalysisConfig(rtisi);
  const auto output_length = static_cast<std::size_t>(
      std::lround(static_cast<double>(audio.size()) / spec.alpha));
  if (output_length < static_cast<std::size_t>(stft.frame_length))
    throw DegenerateInputError(
        "time scale: output of " + std::to_string(output_length) +
        " samples is shorter than one frame");

  const MagnitudeSpectrogram mag = dsp::Magnitude(dsp::Stft(audio, stft));
  return RtisiLa(ResampleFrames(mag, spec.alpha, output_length), rtisi, seed);
}

AudioBuffer PitchScale(const AudioBuffer &audio, const PitchScaleSpec &spec,
                       const RtisiConfig &rtisi, std::uint64_t seed) {
  spec.Validate();
  rtisi.Validate();
  if (audio.empty()) throw DegenerateInputError("pitch scale: empty audio");
  const MagnitudeSpectrogram mag =
      dsp::Magnitude(dsp::Stft(audio, AnalysisConfig(rtisi)));
  MagnitudeSpectrogram mapped = MapPitch(mag, spec.s);
  if (HasEnergy(mag) && !HasEnergy(mapped))
    throw DegenerateInputError(
        "pitch scale: all spectral content maps above Nyquist");
  return RtisiLa(mapped, rtisi, seed);
}

std::string Variant::Suffix() const {
  char buf[16];
  const long pct = std::lround(factor * 100.0);
  std::snprintf(buf, sizeof buf, "-%s%03ld",
                kind == ModKind::kTimeScale ? "sr" : "p", pct);
  return buf;
}

std::string Variant::KindName() const {
  return kind == ModKind::kTimeScale ? "time-scale" : "pitch-scale";
}

AugmentRecipe AugmentRecipe::Make(RecipeName name) {
  const Variant sr{ModKind::kTimeScale, 1.1};
  const Variant p{ModKind::kPitchScale, 0.9};
  const Variant sr2{ModKind::kTimeScale, 1.2};
  const Variant p2{ModKind::kPitchScale, 0.85};
  switch (name) {
    case RecipeName::kSR: return {name, {sr}};
    case RecipeName::kP: return {name, {p}};
    case RecipeName::kSR_P: return {name, {sr, p}};
    case RecipeName::kSR2_P2: return {name, {sr, p, sr2, p2}};
  }
  throw ConfigError("unknown recipe");
}

AugmentRecipe AugmentRecipe::Parse(const std::string &name) {
  std::string key;
  for (char c : name)
    key.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(
                                       static_cast<unsigned char>(c))));
  if (key == "sr") return Make(RecipeName::kSR);
  if (key == "p") return Make(RecipeName::kP);
  if (key == "sr-p") return Make(RecipeName::kSR_P);
  if (key == "sr2-p2") return Make(RecipeName::kSR2_P2);
  throw ConfigError("unknown recipe '" + name +
                    "' (expected sr, p, sr-p or sr2-p2)");
}

std::string AugmentRecipe::Name() const {
  switch (name) {
    case RecipeName::kSR: return "sr";
    case RecipeName::kP: return "p";
    case RecipeName::kSR_P: return "sr-p";
    case RecipeName::kSR2_P2: return "sr2-p2";
  }
  return "unknown";
}

AudioBuffer ApplyVariant(const AudioBuffer &audio, const Variant &variant,
                         const RtisiConfig &rtisi, std::uint64_t seed) {
  if (variant.kind == ModKind::kTimeScale)
    return TimeScale(audio, TimeScaleSpec{variant.factor}, rtisi, seed);
  return PitchScale(audio, PitchScaleSpec{variant.factor}, rtisi, seed);
}

}  // namespace prosokit::prosody
