// include/prosokit/specaug.h

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

#ifndef PROSOKIT_SPECAUG_H_
#define PROSOKIT_SPECAUG_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "prosokit/matrix.h"

namespace prosokit::specaug {

/// T x D features, one row per frame.
struct FeatureMatrix {
  Matrix<double> frames;
  double frame_shift = 0.01;  // seconds

  std::size_t num_frames() const { return frames.rows(); }
  std::size_t dim() const { return frames.cols(); }
};

struct SpecAugPolicy {
  int time_warp_w = 0;   // W, frames
  int freq_mask_f = 0;   // F, bins
  int n_freq_masks = 0;  // mF
  int time_mask_t = 0;   // T, frames
  int n_time_masks = 0;  // mT
  double max_time_mask_ratio = 1.0;  // p: masked frames <= p * num_frames

  /// The LibriSpeech-double (LD) policy: W=80, F=27, mF=2, T=100, p=1, mT=2.
  static SpecAugPolicy LibriSpeechDouble();
  void Validate() const;
};

struct Mask {
  int start;
  int width;
};

struct SpecAugResult {
  FeatureMatrix features;
  bool warp_applied = false;
  bool warp_skipped = false;  // requested but the input is too short
  int warp_anchor = 0;
  int warp_displacement = 0;
  std::vector<Mask> freq_masks;
  std::vector<Mask> time_masks;
};

/// Moves frame `anchor` to `anchor + displacement` with both ends pinned,
/// resampling rows by piecewise-linear interpolation.
Matrix<double> TimeWarp(const Matrix<double> &frames, int anchor,
                        int displacement);

/// Time warp (when num_frames > 2 W), then mF frequency masks of width
/// U[0, F], then mT time masks of width U[0, T] under the p * num_frames
/// budget. Masked cells are set to 0.
SpecAugResult SpecAugment(const FeatureMatrix &features,
                          const SpecAugPolicy &policy, std::uint64_t seed);

using FeatureArchive = std::vector<std::pair<std::string, Matrix<double>>>;

/// Kaldi text archive: `utt-id  [` newline, one row per line, `]` closing
/// the last row.
FeatureArchive ReadKaldiTextArchive(std::istream &in);
void WriteKaldiTextArchive(std::ostream &out, const FeatureArchive &archive);

}  // namespace prosokit::specaug

#endif  // PROSOKIT_SPECAUG_H_
