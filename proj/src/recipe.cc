// src/recipe.cc

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

#include "prosokit/recipe.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "prosokit/error.h"
#include "prosokit/parallel.h"
#include "prosokit/random.h"

namespace prosokit::prosody {

namespace fs = std::filesystem;

RtisiConfig RtisiSettings::ForSampleRate(int sample_rate) const {
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  RtisiConfig c;
  c.iterations_per_frame = iterations_per_frame;
  c.lookahead_frames = lookahead_frames;
  c.stft.frame_length =
      static_cast<int>(std::lround(frame_seconds * sample_rate));
  c.stft.analysis_hop = static_cast<int>(std::lround(hop_seconds * sample_rate));
  c.stft.synthesis_hop = c.stft.analysis_hop;
  c.stft.window = window;
  c.stft.fft_size = 1;
  while (c.stft.fft_size < c.stft.frame_length) c.stft.fft_size *= 2;
  c.Validate();
  return c;
}

namespace {

std::string CsvSafe(std::string s) {
  for (char &c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::string FormatFactor(double f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", f);
  return buf;
}

struct Job {
  std::string src;
  Variant variant;
  std::string new_id;
};

struct Outcome {
  std::string error;  // empty on success
  double duration = 0.0;
};

}  // namespace

void WriteManifest(std::ostream &out, const std::vector<ManifestRow> &rows) {
  out << kManifestHeader << '\n';
  for (const ManifestRow &r : rows)
    out << r.new_utt_id << ',' << r.src_utt_id << ',' << r.kind << ','
        << FormatFactor(r.factor) << ',' << CsvSafe(r.status) << ','
        << r.out_wav_path << '\n';
}

RecipeResult ApplyRecipe(const corpus::DataDir &dir,
                         const AugmentRecipe &recipe, const fs::path &out_root,
                         const RtisiSettings &settings, std::uint64_t seed,
                         int jobs) {
  dir.Validate();
  const fs::path wav_dir = out_root / "wav";
  fs::create_directories(wav_dir);

  std::vector<Job> work;
  for (const std::string &utt : dir.utterance_ids())
    for (const Variant &v : recipe.variants)
      work.push_back({utt, v, utt + v.Suffix()});
  std::sort(work.begin(), work.end(),
            [](const Job &a, const Job &b) { return a.new_id < b.new_id; });
  for (std::size_t i = 0; i + 1 < work.size(); ++i)
    if (work[i].new_id == work[i + 1].new_id)
      throw ValidationError("augmented id collision: " + work[i].new_id);
  for (const Job &j : work)
    if (dir.utt2spk.contains(j.new_id) || dir.wav_map.contains(j.new_id))
      throw ValidationError("augmented id '" + j.new_id +
                            "' collides with an existing id");

  std::vector<Outcome> outcomes(work.size());
  ParallelFor(work.size(), jobs, [&](std::size_t i) {
    const Job &job = work[i];
    Outcome &out = outcomes[i];
    try {
      const dsp::AudioBuffer audio = dir.LoadAudio(job.src);
      const RtisiConfig config = settings.ForSampleRate(audio.sample_rate);
      const std::uint64_t utt_seed = Rng::ForStream(seed, job.new_id).Next();
      const dsp::AudioBuffer modified =
          ApplyVariant(audio, job.variant, config, utt_seed);
      dsp::WriteWav(modified, wav_dir / (job.new_id + ".wav"));
      out.duration = modified.duration_seconds();
    } catch (const std::exception &e) {
      out.error = e.what();
      if (out.error.empty()) out.error = "unknown error";
    }
  });

  RecipeResult result;
  corpus::DataDir &o = result.output;
  o.root = out_root;
  o.text = dir.text;
  o.utt2spk = dir.utt2spk;
  o.spk2group = dir.spk2group;
  o.segments = dir.segments;
  for (const auto &[key, entry] : dir.wav_map)
    o.wav_map[key] = corpus::ResolveWavEntry(dir.root, entry).string();

  for (std::size_t i = 0; i < work.size(); ++i) {
    const Job &job = work[i];
    const Outcome &out = outcomes[i];
    ManifestRow row;
    row.new_utt_id = job.new_id;
    row.src_utt_id = job.src;
    row.kind = job.variant.KindName();
    row.factor = job.variant.factor;
    row.out_wav_path = "wav/" + job.new_id + ".wav";
    if (!out.error.empty()) {
      row.status = "failed: " + out.error;
      ++result.failures;
      std::error_code ec;
      fs::remove(wav_dir / (job.new_id + ".wav"), ec);
    } else {
      row.status = "ok";
      const std::string path = fs::absolute(out_root / row.out_wav_path).string();
      o.wav_map[job.new_id] = path;
      o.text[job.new_id] = dir.text.at(job.src);
      o.utt2spk[job.new_id] = dir.utt2spk.at(job.src);
      if (o.segments) (*o.segments)[job.new_id] = {job.new_id, 0.0, out.duration};
    }
    result.manifest.push_back(std::move(row));
  }

  corpus::WriteDataDir(o, out_root);
  std::ofstream manifest(out_root / "manifest.csv", std::ios::trunc);
  if (!manifest) throw Error("cannot write manifest in " + out_root.string());
  WriteManifest(manifest, result.manifest);
  return result;
}

}  // namespace prosokit::prosody
