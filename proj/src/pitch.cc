// src/pitch.cc

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

#include "prosokit/pitch.h"

#include <algorithm>
#include <cmath>
#include <span>

#include "prosokit/error.h"

namespace prosokit::pitch {

PitchTrack::PitchTrack(std::vector<PitchFrame> frames)
    : frames_(std::move(frames)) {
  for (const PitchFrame &f : frames_) {
    if (f.f0) {
      ++num_voiced_;
      f0_sum_ += *f.f0;
    }
  }
}

double PitchTrack::voiced_fraction() const {
  return frames_.empty() ? 0.0
                         : static_cast<double>(num_voiced_) / frames_.size();
}

double PitchTrack::mean_voiced_f0() const {
  if (num_voiced_ == 0)
    throw DegenerateInputError("pitch track has no voiced frames");
  return f0_sum_ / static_cast<double>(num_voiced_);
}

void PitchTrack::WriteCsv(std::ostream &out) const {
  out << "time,f0,voiced\n";
  for (const PitchFrame &f : frames_)
    out << f.time << ',' << f.f0.value_or(0.0) << ',' << (f.f0 ? 1 : 0)
        << '\n';
}

namespace {

// Normalized cross-correlation between x[0, n - lag) and x[lag, n).
double NormalizedAutocorrelation(std::span<const double> x, int lag) {
  const std::size_t n = x.size() - lag;
  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xy += x[i] * x[i + lag];
    xx += x[i] * x[i];
    yy += x[i + lag] * x[i + lag];
  }
  const double denom = std::sqrt(xx * yy);
  return denom > 0.0 ? xy / denom : 0.0;
}

std::optional<double> FrameF0(std::span<const double> frame, int rate,
                              int min_lag, int max_lag,
                              const PitchOptions &options) {
  double energy = 0.0;
  for (double v : frame) energy += v * v;
  if (std::sqrt(energy / frame.size()) < options.rms_threshold)
    return std::nullopt;

  // r[i] holds the correlation at lag min_lag - 1 + i.
  std::vector<double> r(max_lag - min_lag + 3);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = NormalizedAutocorrelation(frame, min_lag - 1 + static_cast<int>(i));

  double best = -1.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) best = std::max(best, r[i]);
  if (best < options.voicing_threshold) return std::nullopt;

  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    if (r[i] < 0.9 * best || r[i] < r[i - 1] || r[i] < r[i + 1]) continue;
    const double denom = r[i - 1] - 2.0 * r[i] + r[i + 1];
    double offset = denom < 0.0 ? 0.5 * (r[i - 1] - r[i + 1]) / denom : 0.0;
    offset = std::clamp(offset, -0.5, 0.5);
    const auto lag = static_cast<double>(min_lag - 1 + i);
    if (rate / lag < options.f_min || rate / lag > options.f_max)
      return std::nullopt;
    return std::clamp(rate / (lag + offset), options.f_min, options.f_max);
  }
  return std::nullopt;
}

}  // namespace

PitchTrack TrackPitch(const dsp::AudioBuffer &audio,
                      const PitchOptions &options) {
  const int rate = audio.sample_rate;
  if (rate <= 0) throw ConfigError("pitch: sample_rate must be positive");
  if (!(options.f_min > 0.0 && options.f_min < options.f_max &&
        options.f_max < rate / 2.0))
    throw ConfigError("pitch: need 0 < f_min < f_max < sample_rate / 2");

  const int min_lag =
      std::max(2, static_cast<int>(std::floor(rate / options.f_max)));
  const int max_lag = static_cast<int>(std::ceil(rate / options.f_min));
  const auto frame_len = static_cast<std::size_t>(std::max<long>(
      std::lround(options.frame_seconds * rate), 2L * (max_lag + 1)));
  const auto hop = static_cast<std::size_t>(
      std::max<long>(1, std::lround(options.hop_seconds * rate)));

  std::vector<PitchFrame> frames;
  std::span<const double> samples(audio.samples);
  for (std::size_t start = 0; start + frame_len <= samples.size();
       start += hop) {
    PitchFrame f;
    f.time = (static_cast<double>(start) + frame_len / 2.0) / rate;
    f.f0 = FrameF0(samples.subspan(start, frame_len), rate, min_lag, max_lag,
                   options);
    frames.push_back(f);
  }
  return PitchTrack(std::move(frames));
}

PitchTrack TrackPitch(const dsp::AudioBuffer &audio, double f_min,
                      double f_max) {
  PitchOptions options;
  options.f_min = f_min;
  options.f_max = f_max;
  return TrackPitch(audio, options);
}

}  // namespace prosokit::pitch
