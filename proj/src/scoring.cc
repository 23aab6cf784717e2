// src/scoring.cc

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

#include "prosokit/scoring.h"

#include <charconv>
#include <cmath>

#include "prosokit/error.h"
#include "prosokit/version.h"

namespace prosokit::scoring {

const char *EditOpName(EditOp op) {
  switch (op) {
    case EditOp::kMatch: return "C";
    case EditOp::kSubstitution: return "S";
    case EditOp::kDeletion: return "D";
    case EditOp::kInsertion: return "I";
  }
  return "?";
}

std::optional<double> ErrorCounts::wer() const {
  if (n_ref == 0) return std::nullopt;
  return static_cast<double>(errors()) / static_cast<double>(n_ref);
}

ErrorCounts &ErrorCounts::operator+=(const ErrorCounts &o) {
  n_ref += o.n_ref;
  n_hyp += o.n_hyp;
  matches += o.matches;
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  return *this;
}

Alignment Align(const Tokens &ref, const Tokens &hyp) {
  const std::vector<EditOp> ops = AlignSequences<std::string>(ref, hyp);
  Alignment a;
  a.counts.n_ref = ref.size();
  a.counts.n_hyp = hyp.size();
  a.pairs.reserve(ops.size());
  std::size_t i = 0, j = 0;
  for (EditOp op : ops) {
    switch (op) {
      case EditOp::kMatch:
        ++a.counts.matches;
        a.pairs.push_back({op, ref[i++], hyp[j++]});
        break;
      case EditOp::kSubstitution:
        ++a.counts.substitutions;
        a.pairs.push_back({op, ref[i++], hyp[j++]});
        break;
      case EditOp::kDeletion:
        ++a.counts.deletions;
        a.pairs.push_back({op, ref[i++], ""});
        break;
      case EditOp::kInsertion:
        ++a.counts.insertions;
        a.pairs.push_back({op, "", hyp[j++]});
        break;
    }
  }
  return a;
}

namespace {

nlohmann::json CountsJson(const ErrorCounts &c) {
  nlohmann::json j;
  j["n_ref"] = c.n_ref;
  j["n_hyp"] = c.n_hyp;
  j["matches"] = c.matches;
  j["substitutions"] = c.substitutions;
  j["deletions"] = c.deletions;
  j["insertions"] = c.insertions;
  if (auto w = c.wer()) j["wer"] = *w;
  else j["wer"] = nullptr;
  return j;
}

std::string Where(const std::string &source, int line) {
  return (source.empty() ? std::string("line ") : source + ":") +
         std::to_string(line);
}

}  // namespace

nlohmann::json WerReport::ToJson(bool include_per_utt) const {
  nlohmann::json j = CountsJson(totals);
  j["version"] = kVersion;
  j["n_utterances"] = per_utt.size();
  j["filtered_ref_tokens"] = filtered_ref_tokens;
  j["filtered_hyp_tokens"] = filtered_hyp_tokens;
  if (include_per_utt) {
    nlohmann::json utts = nlohmann::json::object();
    for (const auto &[id, rep] : per_utt) {
      nlohmann::json u = CountsJson(rep.counts);
      nlohmann::json pairs = nlohmann::json::array();
      for (const AlignedPair &p : rep.pairs)
        pairs.push_back({EditOpName(p.op), p.ref, p.hyp});
      u["alignment"] = std::move(pairs);
      utts[id] = std::move(u);
    }
    j["per_utt"] = std::move(utts);
  }
  return j;
}

Transcripts ParseTranscripts(std::istream &in, const std::string &source) {
  Transcripts out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Tokens tokens = text::Tokenize(line);
    if (tokens.empty()) continue;
    std::string id = std::move(tokens.front());
    tokens.erase(tokens.begin());
    if (!out.emplace(id, std::move(tokens)).second)
      throw FormatError(Where(source, line_no) + ": duplicate utterance id '" +
                        id + "'");
  }
  return out;
}

WerReport ModifiedWer(const Transcripts &ref, const Transcripts &hyp,
                      const text::TokenFilterRules &rules) {
  for (const auto &[id, tokens] : hyp)
    if (!ref.contains(id))
      throw FormatError("hypothesis utterance '" + id +
                        "' has no reference");
  WerReport report;
  static const Tokens kEmpty;
  for (const auto &[id, ref_tokens] : ref) {
    auto it = hyp.find(id);
    const Tokens &hyp_tokens = it == hyp.end() ? kEmpty : it->second;
    const Tokens r = text::FilterTokens(ref_tokens, rules);
    const Tokens h = text::FilterTokens(hyp_tokens, rules);
    report.filtered_ref_tokens += ref_tokens.size() - r.size();
    report.filtered_hyp_tokens += hyp_tokens.size() - h.size();
    Alignment a = Align(r, h);
    report.totals += a.counts;
    report.per_utt.emplace(id, UttReport{a.counts, std::move(a.pairs)});
  }
  return report;
}

std::vector<CtmEntry> ParseCtm(std::istream &in, const std::string &source) {
  std::vector<CtmEntry> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Tokens f = text::Tokenize(line);
    if (f.empty() || f.front().starts_with(";;")) continue;
    if (f.size() != 5 && f.size() != 6)
      throw FormatError(Where(source, line_no) + ": expected 5 or 6 fields, got " +
                        std::to_string(f.size()));
    CtmEntry e;
    e.utt_id = f[0];
    e.channel = f[1];
    auto number = [&](const std::string &s, const char *what) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != s.size() || !std::isfinite(v))
        throw FormatError(Where(source, line_no) + ": bad " + what + " '" + s +
                          "'");
      return v;
    };
    e.begin = number(f[2], "begin time");
    e.duration = number(f[3], "duration");
    e.word = f[4];
    e.confidence = f.size() == 6 ? number(f[5], "confidence") : 1.0;
    if (e.begin < 0.0 || e.duration < 0.0)
      throw FormatError(Where(source, line_no) + ": negative time");
    if (e.confidence < 0.0 || e.confidence > 1.0)
      throw FormatError(Where(source, line_no) + ": confidence " + f[5] +
                        " outside [0, 1]");
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

// Shortest text that parses back to the same double.
std::string Shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

void WriteCtm(std::ostream &out, std::span<const CtmEntry> entries) {
  for (const CtmEntry &e : entries)
    out << e.utt_id << ' ' << e.channel << ' ' << Shortest(e.begin) << ' '
        << Shortest(e.duration) << ' ' << e.word << ' '
        << Shortest(e.confidence) << '\n';
}

namespace {

bool CtmLess(const CtmEntry &a, const CtmEntry &b) {
  if (a.utt_id != b.utt_id) return a.utt_id < b.utt_id;
  return a.begin < b.begin;
}

std::vector<CtmEntry> Sorted(std::span<const CtmEntry> entries) {
  std::vector<CtmEntry> v(entries.begin(), entries.end());
  if (!std::is_sorted(v.begin(), v.end(), CtmLess))
    std::stable_sort(v.begin(), v.end(), CtmLess);
  return v;
}

}  // namespace

std::vector<CtmEntry> FilterCtm(std::span<const CtmEntry> entries,
                                const ConfidenceFilterConfig &config) {
  if (!(config.threshold >= 0.0 && config.threshold <= 1.0))
    throw ConfigError("confidence threshold must be in [0, 1]");
  for (const CtmEntry &e : entries)
    if (!(e.confidence >= 0.0 && e.confidence <= 1.0))
      throw FormatError("ctm entry '" + e.word + "' in '" + e.utt_id +
                        "' has confidence outside [0, 1]");
  std::vector<CtmEntry> kept;
  for (CtmEntry &e : Sorted(entries))
    if (e.confidence >= config.threshold) kept.push_back(std::move(e));
  return kept;
}

Transcripts CtmToTranscripts(std::span<const CtmEntry> entries) {
  Transcripts out;
  for (const CtmEntry &e : Sorted(entries)) out[e.utt_id].push_back(e.word);
  return out;
}

std::vector<double> ThresholdGrid(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1.0))
    throw ConfigError("grid step must be in (0, 1]");
  std::vector<double> grid;
  const double steps = 1.0 / grid_step;
  const auto n = static_cast<long>(std::floor(steps + 1e-9));
  for (long i = 0; i <= n; ++i)
    grid.push_back(std::min(1.0, static_cast<double>(i) * grid_step));
  if (std::abs(grid.back() - 1.0) < 1e-9)
    grid.back() = 1.0;
  else
    grid.push_back(1.0);
  return grid;
}

SweepResult SweepThreshold(std::span<const CtmEntry> entries,
                           const Transcripts &ref,
                           const text::TokenFilterRules &rules,
                           double grid_step) {
  const std::vector<double> grid = ThresholdGrid(grid_step);
  if (ref.empty()) throw DegenerateInputError("sweep: empty reference");

  // Utterances whose words are all filtered out drop from the hypothesis
  // map and score as empty hypotheses.
  SweepResult result;
  std::optional<std::size_t> best_errors;
  for (double threshold : grid) {
    const std::vector<CtmEntry> kept = FilterCtm(entries, {threshold});
    const WerReport report = ModifiedWer(ref, CtmToTranscripts(kept), rules);
    const std::optional<double> wer = report.wer();
    if (!wer)
      throw DegenerateInputError(
          "sweep: reference has no English tokens after filtering");
    result.curve.emplace_back(threshold, *wer);
    if (!best_errors || report.totals.errors() < *best_errors) {
      best_errors = report.totals.errors();
      result.best_threshold = threshold;
      result.best_wer = *wer;
    }
  }
  return result;
}

}  // namespace prosokit::scoring
