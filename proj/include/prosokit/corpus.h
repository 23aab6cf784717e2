// include/prosokit/corpus.h

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

#ifndef PROSOKIT_CORPUS_H_
#define PROSOKIT_CORPUS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "prosokit/audio.h"
#include "prosokit/text.h"

namespace prosokit::corpus {

struct Segment {
  std::string recording;
  double begin = 0.0;  // seconds
  double end = 0.0;
};

/// A Kaldi data directory: wav.scp, text, utt2spk and optionally segments
/// and spk2group (speaker -> group label such as A1/A2/B1).
struct DataDir {
  std::filesystem::path root;
  // Keyed by utterance, or by recording when segments are present.
  std::map<std::string, std::string> wav_map;
  std::map<std::string, text::Tokens> text;
  std::map<std::string, std::string> utt2spk;
  std::optional<std::map<std::string, Segment>> segments;
  std::optional<std::map<std::string, std::string>> spk2group;

  std::vector<std::string> utterance_ids() const;
  std::size_t size() const { return utt2spk.size(); }

  /// Absolute path of the audio backing `utt` (the recording for segmented
  /// dirs). Relative wav.scp entries resolve against the working
  /// directory, then against `root`.
  std::filesystem::path AudioPath(const std::string &utt) const;

  /// The utterance's samples, cut to its segment when segmented.
  dsp::AudioBuffer LoadAudio(const std::string &utt) const;

  /// Duration in seconds from the segment, else from the WAV header.
  double Duration(const std::string &utt) const;

  /// Cross-checks the tables; throws ValidationError listing every
  /// offending id.
  void Validate() const;
};

/// Resolves a wav.scp value to an absolute file path: relative entries try
/// the working directory first, then `root`. Pipe entries are rejected.
std::filesystem::path ResolveWavEntry(const std::filesystem::path &root,
                                      const std::string &entry);

DataDir LoadDataDir(const std::filesystem::path &root);

/// Writes wav.scp, text, utt2spk, spk2utt and, when present, segments and
/// spk2group. Output is sorted by key.
void WriteDataDir(const DataDir &dir, const std::filesystem::path &root);

struct GroupStats {
  std::size_t n_utterances = 0;
  std::size_t n_speakers = 0;
  std::size_t n_words = 0;
  double duration_s = 0.0;
  double words_per_second = 0.0;
  std::optional<double> mean_pitch_hz;  // none when nothing was voiced
};

struct CorpusStats {
  std::size_t n_utterances = 0;
  std::size_t n_words = 0;
  std::size_t n_speakers = 0;
  double duration_hours = 0.0;
  std::map<std::string, GroupStats> per_group;
  std::vector<std::pair<std::string, std::string>> skipped;  // utt, reason
  std::vector<std::string> warnings;

  nlohmann::json ToJson() const;
};

/// Label used for every speaker when there is no spk2group table.
inline constexpr const char *kImplicitGroup = "all";

/// Table-1 style totals and Table-2 style per-group speaking rate and mean
/// pitch. Per-group pitch is the duration-weighted mean of each
/// utterance's mean voiced f0. Unreadable audio is skipped and reported.
CorpusStats ComputeStats(const DataDir &dir, double f_min = 100.0,
                         double f_max = 500.0, int jobs = 1);

}  // namespace prosokit::corpus

#endif  // PROSOKIT_CORPUS_H_
