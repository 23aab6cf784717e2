// include/prosokit/recipe.h

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

#ifndef PROSOKIT_RECIPE_H_
#define PROSOKIT_RECIPE_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "prosokit/corpus.h"
#include "prosokit/prosody.h"

namespace prosokit::prosody {

/// Reconstruction settings in physical units, resolved per utterance
/// against its sample rate.
struct RtisiSettings {
  int iterations_per_frame = 8;
  int lookahead_frames = 3;
  double frame_seconds = 0.032;
  double hop_seconds = 0.008;
  dsp::WindowType window = dsp::WindowType::kHann;

  RtisiConfig ForSampleRate(int sample_rate) const;
};

/// One row of manifest.csv.
struct ManifestRow {
  std::string new_utt_id;
  std::string src_utt_id;
  std::string kind;
  double factor = 0.0;
  std::string status;        // "ok" or "failed: <reason>"
  std::string out_wav_path;  // relative to the output root

  bool ok() const { return status == "ok"; }
};

struct RecipeResult {
  corpus::DataDir output;
  std::vector<ManifestRow> manifest;  // sorted by new_utt_id
  std::size_t failures = 0;
};

inline constexpr const char *kManifestHeader =
    "new_utt_id,src_utt_id,kind,factor,status,out_wav_path";

void WriteManifest(std::ostream &out, const std::vector<ManifestRow> &rows);

/// Writes one modified copy of every utterance per recipe variant to
/// out_root/wav/<utt><suffix>.wav and a data dir at out_root listing the
/// originals plus every successful copy, with out_root/manifest.csv.
/// Failures are recorded in the manifest and skipped. Output is identical
/// for any `jobs`.
RecipeResult ApplyRecipe(const corpus::DataDir &dir,
                         const AugmentRecipe &recipe,
                         const std::filesystem::path &out_root,
                         const RtisiSettings &settings, std::uint64_t seed,
                         int jobs = 1);

}  // namespace prosokit::prosody

#endif  // PROSOKIT_RECIPE_H_
