// include/prosokit/scoring.h

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

#ifndef PROSOKIT_SCORING_H_
#define PROSOKIT_SCORING_H_

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "prosokit/text.h"

namespace prosokit::scoring {

using text::Tokens;
using Transcripts = std::map<std::string, Tokens>;

enum class EditOp : std::uint8_t { kMatch, kSubstitution, kDeletion, kInsertion };

const char *EditOpName(EditOp op);

/// Minimum edit distance alignment with unit costs. The backtrace starts at
/// the end of both sequences and prefers match, then substitution, then
/// deletion, then insertion, so alignments are reproducible.
template <typename T>
std::vector<EditOp> AlignSequences(std::span<const T> ref,
                                   std::span<const T> hyp) {
  const std::size_t n = ref.size(), m = hyp.size(), w = m + 1;
  std::vector<std::uint32_t> d((n + 1) * w);
  for (std::size_t j = 0; j <= m; ++j) d[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    d[i * w] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t diag =
          d[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0u : 1u);
      const std::uint32_t up = d[(i - 1) * w + j] + 1;
      const std::uint32_t left = d[i * w + j - 1] + 1;
      d[i * w + j] = std::min({diag, up, left});
    }
  }

  std::vector<EditOp> ops;
  ops.reserve(n + m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::uint32_t cur = d[i * w + j];
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] &&
        cur == d[(i - 1) * w + j - 1]) {
      ops.push_back(EditOp::kMatch);
      --i, --j;
    } else if (i > 0 && j > 0 && cur == d[(i - 1) * w + j - 1] + 1) {
      ops.push_back(EditOp::kSubstitution);
      --i, --j;
    } else if (i > 0 && cur == d[(i - 1) * w + j] + 1) {
      ops.push_back(EditOp::kDeletion);
      --i;
    } else {
      ops.push_back(EditOp::kInsertion);
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

struct ErrorCounts {
  std::size_t n_ref = 0;
  std::size_t n_hyp = 0;
  std::size_t matches = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
  /// (S + D + I) / n_ref; nullopt when the reference is empty.
  std::optional<double> wer() const;

  ErrorCounts &operator+=(const ErrorCounts &o);
  bool operator==(const ErrorCounts &) const = default;
};

struct AlignedPair {
  EditOp op;
  std::string ref;  // empty for insertions
  std::string hyp;  // empty for deletions
};

struct Alignment {
  std::vector<AlignedPair> pairs;
  ErrorCounts counts;
};

Alignment Align(const Tokens &ref, const Tokens &hyp);

struct UttReport {
  ErrorCounts counts;
  std::vector<AlignedPair> pairs;
};

struct WerReport {
  ErrorCounts totals;  // pooled over utterances
  std::map<std::string, UttReport> per_utt;
  std::size_t filtered_ref_tokens = 0;  // tokens removed by the filter
  std::size_t filtered_hyp_tokens = 0;

  std::optional<double> wer() const { return totals.wer(); }
  nlohmann::json ToJson(bool include_per_utt) const;
};

/// Reads `utt-id token ...` lines. Throws FormatError naming the id on a
/// duplicate.
Transcripts ParseTranscripts(std::istream &in, const std::string &source = "");

/// Filters non-English tokens out of both sides, then pools the per
/// utterance alignment counts. Reference utterances without a hypothesis
/// are scored against an empty one; a hypothesis id missing from the
/// reference is a FormatError.
WerReport ModifiedWer(const Transcripts &ref, const Transcripts &hyp,
                      const text::TokenFilterRules &rules = {});

struct CtmEntry {
  std::string utt_id;
  std::string channel;
  double begin = 0.0;
  double duration = 0.0;
  std::string word;
  double confidence = 1.0;

  bool operator==(const CtmEntry &) const = default;
};

/// Whitespace-separated `utt chan begin dur word [conf]`; a missing
/// confidence reads as 1.0. Lines starting with ";;" are comments.
std::vector<CtmEntry> ParseCtm(std::istream &in, const std::string &source = "");
void WriteCtm(std::ostream &out, std::span<const CtmEntry> entries);

struct ConfidenceFilterConfig {
  double threshold = 0.0;  // keep confidence >= threshold
};

/// Returns the entries with confidence >= threshold, ordered by
/// (utt_id, begin); input order is kept among equal keys.
std::vector<CtmEntry> FilterCtm(std::span<const CtmEntry> entries,
                                const ConfidenceFilterConfig &config);

/// Groups words per utterance in (utt_id, begin) order.
Transcripts CtmToTranscripts(std::span<const CtmEntry> entries);

struct SweepResult {
  double best_threshold = 0.0;
  double best_wer = 0.0;
  std::vector<std::pair<double, double>> curve;  // (threshold, wer)
};

/// The thresholds 0, step, 2 step, ..., 1.
std::vector<double> ThresholdGrid(double grid_step);

/// Scores FilterCtm output at every grid threshold and returns the one with
/// the lowest modified WER; ties go to the smaller threshold.
SweepResult SweepThreshold(std::span<const CtmEntry> entries,
                           const Transcripts &ref,
                           const text::TokenFilterRules &rules = {},
                           double grid_step = 0.01);

}  // namespace prosokit::scoring

#endif  // PROSOKIT_SCORING_H_
