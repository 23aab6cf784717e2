// src/corpus.cc

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

#include "prosokit/corpus.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "prosokit/error.h"
#include "prosokit/parallel.h"
#include "prosokit/pitch.h"
#include "prosokit/version.h"

namespace prosokit::corpus {

namespace fs = std::filesystem;

namespace {

std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Splits "key rest-of-line" at the first run of whitespace.
std::pair<std::string, std::string> SplitKey(const std::string &line) {
  const std::string t = Trim(line);
  const auto sp = t.find_first_of(" \t");
  if (sp == std::string::npos) return {t, ""};
  return {t.substr(0, sp), Trim(t.substr(sp))};
}

std::ifstream OpenTable(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw Error("missing or unreadable file: " + path.string());
  return in;
}

template <typename Value, typename ParseValue>
std::map<std::string, Value> ReadTable(const fs::path &path,
                                       ParseValue parse_value) {
  std::ifstream in = OpenTable(path);
  std::map<std::string, Value> table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto [key, rest] = SplitKey(line);
    if (key.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (table.contains(key))
      throw FormatError(where + ": duplicate id '" + key + "'");
    table.emplace(key, parse_value(rest, where));
  }
  return table;
}

std::string RequireValue(const std::string &rest, const std::string &where) {
  if (rest.empty()) throw FormatError(where + ": missing value");
  return rest;
}

std::string RequireSingleToken(const std::string &rest,
                               const std::string &where) {
  text::Tokens t = text::Tokenize(rest);
  if (t.size() != 1) throw FormatError(where + ": expected exactly one value");
  return t[0];
}

double ParseSeconds(const std::string &s, const std::string &where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v))
    throw FormatError(where + ": bad time '" + s + "'");
  return v;
}

Segment ParseSegment(const std::string &rest, const std::string &where) {
  text::Tokens t = text::Tokenize(rest);
  if (t.size() != 3)
    throw FormatError(where + ": expected 'utt recording begin end'");
  Segment s{t[0], ParseSeconds(t[1], where), ParseSeconds(t[2], where)};
  if (s.begin < 0.0) throw FormatError(where + ": negative segment begin");
  return s;
}

std::string JoinIds(const std::vector<std::string> &ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > shown)
    out += ", ... (" + std::to_string(ids.size() - shown) + " more)";
  return out;
}

template <typename A, typename B>
std::vector<std::string> MissingKeys(const std::map<std::string, A> &from,
                                     const std::map<std::string, B> &in) {
  std::vector<std::string> out;
  for (const auto &kv : from)
    if (!in.contains(kv.first)) out.push_back(kv.first);
  return out;
}

}  // namespace

std::vector<std::string> DataDir::utterance_ids() const {
  std::vector<std::string> ids;
  ids.reserve(utt2spk.size());
  for (const auto &kv : utt2spk) ids.push_back(kv.first);
  return ids;
}

void DataDir::Validate() const {
  std::vector<std::string> problems;
  auto report = [&](const std::string &what,
                    const std::vector<std::string> &ids) {
    if (!ids.empty())
      problems.push_back(what + ": " + JoinIds(ids));
  };

  report("in text but not utt2spk", MissingKeys(text, utt2spk));
  report("in utt2spk but not text", MissingKeys(utt2spk, text));
  if (segments) {
    report("in segments but not text", MissingKeys(*segments, text));
    report("in text but not segments", MissingKeys(text, *segments));
    std::vector<std::string> unknown_rec, bad_times;
    for (const auto &[utt, seg] : *segments) {
      if (!wav_map.contains(seg.recording)) unknown_rec.push_back(utt);
      if (!(seg.begin < seg.end)) bad_times.push_back(utt);
    }
    report("segments referencing unknown recordings", unknown_rec);
    report("segments with begin >= end", bad_times);
  } else {
    report("in text but not wav.scp", MissingKeys(text, wav_map));
    report("in wav.scp but not text", MissingKeys(wav_map, text));
  }
  std::vector<std::string> empty_speaker;
  for (const auto &[utt, spk] : utt2spk)
    if (spk.empty()) empty_speaker.push_back(utt);
  report("utterances without a speaker", empty_speaker);
  if (spk2group) {
    std::set<std::string> speakers;
    for (const auto &kv : utt2spk) speakers.insert(kv.second);
    std::vector<std::string> dangling;
    for (const auto &kv : *spk2group)
      if (!speakers.contains(kv.first)) dangling.push_back(kv.first);
    report("spk2group speakers absent from utt2spk", dangling);
  }

  if (!problems.empty()) {
    std::string msg = "data dir " + root.string() + " is inconsistent";
    for (const std::string &p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
}

fs::path DataDir::AudioPath(const std::string &utt) const {
  std::string key = utt;
  if (segments) {
    auto it = segments->find(utt);
    if (it == segments->end()) throw Error("no segment for '" + utt + "'");
    key = it->second.recording;
  }
  auto it = wav_map.find(key);
  if (it == wav_map.end()) throw Error("no wav.scp entry for '" + key + "'");
  return ResolveWavEntry(root, it->second);
}

fs::path ResolveWavEntry(const fs::path &root, const std::string &entry) {
  if (!entry.empty() && entry.back() == '|')
    throw UnsupportedFormatError("wav.scp entry '" + entry +
                                 "' is a pipe command; only file paths are "
                                 "supported");
  fs::path p(entry);
  if (p.is_absolute()) return p;
  std::error_code ec;
  if (fs::exists(p, ec)) return fs::absolute(p);
  return fs::absolute(root / p);
}

dsp::AudioBuffer DataDir::LoadAudio(const std::string &utt) const {
  dsp::AudioBuffer audio = dsp::ReadWav(AudioPath(utt));
  if (!segments) return audio;
  const Segment &seg = segments->at(utt);
  const auto rate = static_cast<double>(audio.sample_rate);
  const auto begin = std::min(audio.size(),
                              static_cast<std::size_t>(std::lround(seg.begin * rate)));
  const auto end = std::min(audio.size(),
                            static_cast<std::size_t>(std::lround(seg.end * rate)));
  if (end <= begin)
    throw DegenerateInputError("segment '" + utt + "' lies outside its recording");
  audio.samples = std::vector<double>(audio.samples.begin() + begin,
                                      audio.samples.begin() + end);
  return audio;
}

double DataDir::Duration(const std::string &utt) const {
  if (segments) {
    const Segment &seg = segments->at(utt);
    return seg.end - seg.begin;
  }
  return dsp::ReadWavInfo(AudioPath(utt)).duration_seconds();
}

DataDir LoadDataDir(const fs::path &root) {
  DataDir dir;
  dir.root = root;
  dir.text = ReadTable<text::Tokens>(
      root / "text",
      [](const std::string &rest, const std::string &) {
        return text::Tokenize(rest);
      });
  dir.utt2spk = ReadTable<std::string>(root / "utt2spk", RequireSingleToken);
  dir.wav_map = ReadTable<std::string>(root / "wav.scp", RequireValue);
  if (fs::exists(root / "segments"))
    dir.segments = ReadTable<Segment>(root / "segments", ParseSegment);
  if (fs::exists(root / "spk2group"))
    dir.spk2group =
        ReadTable<std::string>(root / "spk2group", RequireSingleToken);

  if (fs::exists(root / "spk2utt")) {
    // spk2utt must be the exact inverse of utt2spk.
    auto spk2utt = ReadTable<text::Tokens>(
        root / "spk2utt", [](const std::string &rest, const std::string &) {
          return text::Tokenize(rest);
        });
    std::vector<std::string> dangling;
    std::size_t listed = 0;
    for (const auto &[spk, utts] : spk2utt) {
      for (const std::string &u : utts) {
        ++listed;
        auto it = dir.utt2spk.find(u);
        if (it == dir.utt2spk.end() || it->second != spk)
          dangling.push_back(spk + "/" + u);
      }
    }
    if (!dangling.empty() || listed != dir.utt2spk.size())
      throw ValidationError("spk2utt disagrees with utt2spk" +
                            (dangling.empty() ? std::string()
                                              : ": " + JoinIds(dangling)));
  }
  dir.Validate();
  return dir;
}

void WriteDataDir(const DataDir &dir, const fs::path &root) {
  fs::create_directories(root);
  auto open = [&](const char *name) {
    std::ofstream out(root / name, std::ios::trunc);
    if (!out) throw Error("cannot write " + (root / name).string());
    return out;
  };
  {
    auto out = open("wav.scp");
    for (const auto &[k, v] : dir.wav_map) out << k << ' ' << v << '\n';
  }
  {
    auto out = open("text");
    for (const auto &[k, v] : dir.text) {
      out << k;
      for (const std::string &t : v) out << ' ' << t;
      out << '\n';
    }
  }
  std::map<std::string, std::vector<std::string>> spk2utt;
  {
    auto out = open("utt2spk");
    for (const auto &[k, v] : dir.utt2spk) {
      out << k << ' ' << v << '\n';
      spk2utt[v].push_back(k);
    }
  }
  {
    auto out = open("spk2utt");
    for (const auto &[spk, utts] : spk2utt) {
      out << spk;
      for (const std::string &u : utts) out << ' ' << u;
      out << '\n';
    }
  }
  if (dir.segments) {
    auto out = open("segments");
    char buf[64];
    for (const auto &[k, s] : *dir.segments) {
      std::snprintf(buf, sizeof buf, " %.3f %.3f", s.begin, s.end);
      out << k << ' ' << s.recording << buf << '\n';
    }
  }
  if (dir.spk2group) {
    auto out = open("spk2group");
    for (const auto &[k, v] : *dir.spk2group) out << k << ' ' << v << '\n';
  }
}

nlohmann::json CorpusStats::ToJson() const {
  nlohmann::json j;
  j["version"] = kVersion;
  j["n_utterances"] = n_utterances;
  j["n_words"] = n_words;
  j["n_speakers"] = n_speakers;
  j["duration_hours"] = duration_hours;
  nlohmann::json groups = nlohmann::json::object();
  for (const auto &[name, g] : per_group) {
    nlohmann::json gj;
    gj["n_utterances"] = g.n_utterances;
    gj["n_speakers"] = g.n_speakers;
    gj["n_words"] = g.n_words;
    gj["duration_s"] = g.duration_s;
    gj["words_per_second"] = g.words_per_second;
    if (g.mean_pitch_hz) gj["mean_pitch_hz"] = *g.mean_pitch_hz;
    else gj["mean_pitch_hz"] = nullptr;
    groups[name] = std::move(gj);
  }
  j["groups"] = std::move(groups);
  nlohmann::json skipped_json = nlohmann::json::array();
  for (const auto &[utt, reason] : skipped)
    skipped_json.push_back({{"utt", utt}, {"reason", reason}});
  j["skipped"] = std::move(skipped_json);
  j["warnings"] = warnings;
  return j;
}

namespace {

struct UttMeasure {
  bool ok = false;
  std::string error;
  double duration = 0.0;
  std::optional<double> mean_f0;
};

struct GroupAccumulator {
  std::set<std::string> speakers;
  GroupStats stats;
  double pitch_weighted = 0.0;
  double pitch_weight = 0.0;
};

}  // namespace

CorpusStats ComputeStats(const DataDir &dir, double f_min, double f_max,
                         int jobs) {
  const std::vector<std::string> ids = dir.utterance_ids();
  std::vector<UttMeasure> measures(ids.size());
  ParallelFor(ids.size(), jobs, [&](std::size_t i) {
    UttMeasure &m = measures[i];
    try {
      const dsp::AudioBuffer audio = dir.LoadAudio(ids[i]);
      m.duration = dir.segments ? dir.Duration(ids[i]) : audio.duration_seconds();
      const pitch::PitchTrack track = pitch::TrackPitch(audio, f_min, f_max);
      if (track.has_voiced()) m.mean_f0 = track.mean_voiced_f0();
      m.ok = true;
    } catch (const std::exception &e) {
      m.error = e.what();
    }
  });

  CorpusStats stats;
  stats.n_utterances = ids.size();
  std::set<std::string> speakers;
  std::map<std::string, GroupAccumulator> groups;
  std::set<std::string> ungrouped;
  double total_seconds = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::string &utt = ids[i];
    const std::string &spk = dir.utt2spk.at(utt);
    const std::size_t words = dir.text.at(utt).size();
    stats.n_words += words;
    speakers.insert(spk);
    const UttMeasure &m = measures[i];
    if (!m.ok) {
      stats.skipped.emplace_back(utt, m.error);
      continue;
    }
    total_seconds += m.duration;

    std::string group = kImplicitGroup;
    if (dir.spk2group) {
      auto it = dir.spk2group->find(spk);
      if (it == dir.spk2group->end()) {
        ungrouped.insert(spk);
        continue;
      }
      group = it->second;
    }
    GroupAccumulator &acc = groups[group];
    acc.speakers.insert(spk);
    ++acc.stats.n_utterances;
    acc.stats.n_words += words;
    acc.stats.duration_s += m.duration;
    if (m.mean_f0) {
      acc.pitch_weighted += *m.mean_f0 * m.duration;
      acc.pitch_weight += m.duration;
    }
  }
  stats.n_speakers = speakers.size();
  stats.duration_hours = total_seconds / 3600.0;

  if (dir.spk2group) {
    std::set<std::string> labels;
    for (const auto &kv : *dir.spk2group) labels.insert(kv.second);
    for (const std::string &label : labels)
      if (auto it = groups.find(label);
          it == groups.end() || it->second.stats.duration_s <= 0.0)
        stats.warnings.push_back("group '" + label +
                                 "' has no audio and is omitted");
  }
  if (!ungrouped.empty())
    stats.warnings.push_back(std::to_string(ungrouped.size()) +
                             " speaker(s) have no spk2group entry and are "
                             "excluded from per-group stats");
  for (auto &[label, acc] : groups) {
    if (acc.stats.duration_s <= 0.0) continue;
    GroupStats g = acc.stats;
    g.n_speakers = acc.speakers.size();
    g.words_per_second = static_cast<double>(g.n_words) / g.duration_s;
    if (acc.pitch_weight > 0.0) g.mean_pitch_hz = acc.pitch_weighted / acc.pitch_weight;
    stats.per_group.emplace(label, g);
  }
  if (!dir.spk2group && !ids.empty() && stats.per_group.empty())
    stats.warnings.push_back("no readable audio; per-group stats omitted");
  return stats;
}

}  // namespace prosokit::corpus
