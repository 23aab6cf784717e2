// tools/cli.cc

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

#include "cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "prosokit/audio.h"
#include "prosokit/corpus.h"
#include "prosokit/error.h"
#include "prosokit/parallel.h"
#include "prosokit/pitch.h"
#include "prosokit/prosody.h"
#include "prosokit/random.h"
#include "prosokit/recipe.h"
#include "prosokit/scoring.h"
#include "prosokit/specaug.h"
#include "prosokit/text.h"
#include "prosokit/version.h"

namespace prosokit::cli {

namespace fs = std::filesystem;

namespace {

class Logger {
 public:
  Logger(std::ostream &err, const LogLevel &level) : err_(err), level_(level) {}

  void Error(const std::string &msg) const { Log(LogLevel::kError, "ERROR", msg); }
  void Warn(const std::string &msg) const { Log(LogLevel::kWarn, "WARN", msg); }
  void Info(const std::string &msg) const { Log(LogLevel::kInfo, "INFO", msg); }

 private:
  void Log(LogLevel at, const char *tag, const std::string &msg) const {
    if (static_cast<int>(at) <= static_cast<int>(level_))
      err_ << "prosokit " << tag << ": " << msg << '\n';
  }

  std::ostream &err_;
  const LogLevel &level_;
};

std::ifstream OpenIn(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream OpenOut(const std::string &path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

// Reconstruction flags shared by augment, tsm and pitch.
struct RtisiFlags {
  prosody::RtisiSettings settings;
  std::string window = "hann";
  double frame_ms = 32.0;
  double hop_ms = 8.0;

  void Add(CLI::App &app) {
    app.add_option("--iterations", settings.iterations_per_frame,
                   "RTISI-LA projections per committed frame")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--lookahead", settings.lookahead_frames,
                   "RTISI-LA look-ahead frames")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_option("--frame-ms", frame_ms, "STFT frame length in ms")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--hop-ms", hop_ms, "STFT hop in ms")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--window", window, "STFT window")
        ->capture_default_str()
        ->check(CLI::IsMember({"hann", "hamming", "rectangular"}));
  }

  prosody::RtisiSettings Resolve() const {
    prosody::RtisiSettings s = settings;
    s.frame_seconds = frame_ms / 1000.0;
    s.hop_seconds = hop_ms / 1000.0;
    s.window = dsp::ParseWindowType(window);
    return s;
  }
};

text::TokenFilterRules LoadTokenRules(const std::string &path) {
  text::TokenFilterRules rules;
  if (path.empty()) return rules;
  // Lines: `unk <token>`, `filler-prefix <char>`, `false-start-suffix <char>`.
  std::ifstream in = OpenIn(path);
  rules.unk_tokens.clear();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    text::Tokens t = text::Tokenize(line);
    if (t.empty() || t[0].starts_with("#")) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (t.size() != 2) throw FormatError(where + ": expected '<key> <value>'");
    if (t[0] == "unk") {
      rules.unk_tokens.insert(t[1]);
    } else if (t[0] == "filler-prefix" && t[1].size() == 1) {
      rules.filler_prefix = t[1][0];
    } else if (t[0] == "false-start-suffix" && t[1].size() == 1) {
      rules.false_start_suffix = t[1][0];
    } else {
      throw FormatError(where + ": unknown rule '" + t[0] + " " + t[1] + "'");
    }
  }
  if (rules.unk_tokens.empty())
    rules.unk_tokens = text::TokenFilterRules{}.unk_tokens;
  rules.Validate();
  return rules;
}

scoring::Transcripts LoadTranscripts(const std::string &path) {
  std::ifstream in = OpenIn(path);
  return scoring::ParseTranscripts(in, path);
}

int CmdAugment(const std::string &data_dir, const std::string &recipe_name,
               const std::string &out_dir, const RtisiFlags &flags,
               const GlobalOptions &g, const Logger &log) {
  const corpus::DataDir dir = corpus::LoadDataDir(data_dir);
  const prosody::AugmentRecipe recipe =
      prosody::AugmentRecipe::Parse(recipe_name);
  log.Info("augmenting " + std::to_string(dir.size()) + " utterances with " +
           recipe.Name() + " (" + std::to_string(recipe.multiplier()) + "x)");
  const prosody::RecipeResult result = prosody::ApplyRecipe(
      dir, recipe, out_dir, flags.Resolve(), g.seed, g.jobs);
  for (const prosody::ManifestRow &row : result.manifest)
    if (!row.ok()) log.Warn(row.new_utt_id + ": " + row.status);
  log.Info("wrote " + std::to_string(result.output.size()) +
           " utterances to " + out_dir);
  return result.failures == 0 ? kExitOk : kExitPartial;
}

int CmdModify(const std::string &in_path, const std::string &out_path,
              prosody::Variant variant, const RtisiFlags &flags,
              const GlobalOptions &g) {
  const dsp::AudioBuffer audio = dsp::ReadWav(in_path);
  const prosody::RtisiConfig config =
      flags.Resolve().ForSampleRate(audio.sample_rate);
  dsp::WriteWav(prosody::ApplyVariant(audio, variant, config, g.seed),
                out_path);
  return kExitOk;
}

int CmdTrackPitch(const std::string &in_path, const std::string &out_path,
                  const pitch::PitchOptions &options, std::ostream &out) {
  const pitch::PitchTrack track =
      pitch::TrackPitch(dsp::ReadWav(in_path), options);
  if (!out_path.empty()) {
    std::ofstream csv = OpenOut(out_path);
    track.WriteCsv(csv);
  }
  nlohmann::json j;
  j["frames"] = track.frames().size();
  j["voiced_fraction"] = track.voiced_fraction();
  if (track.has_voiced()) j["mean_voiced_f0"] = track.mean_voiced_f0();
  else j["mean_voiced_f0"] = nullptr;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int CmdSpecAug(const std::string &in_path, const std::string &out_path,
               const specaug::SpecAugPolicy &policy, const GlobalOptions &g,
               const Logger &log) {
  policy.Validate();
  std::ifstream in = OpenIn(in_path);
  const specaug::FeatureArchive input = specaug::ReadKaldiTextArchive(in);
  specaug::FeatureArchive output(input.size());
  std::vector<bool> skipped(input.size(), false);
  ParallelFor(input.size(), g.jobs, [&](std::size_t i) {
    const auto &[key, m] = input[i];
    specaug::FeatureMatrix feat{m, 0.01};
    const std::uint64_t seed = Rng::ForStream(g.seed, key).Next();
    specaug::SpecAugResult r = specaug::SpecAugment(feat, policy, seed);
    skipped[i] = r.warp_skipped;
    output[i] = {key, std::move(r.features.frames)};
  });
  for (std::size_t i = 0; i < input.size(); ++i)
    if (skipped[i])
      log.Warn(input[i].first + ": too short for time warp, warp skipped");
  std::ofstream out = OpenOut(out_path);
  specaug::WriteKaldiTextArchive(out, output);
  return kExitOk;
}

int CmdNoiseText(const std::string &in_path, const std::string &out_path,
                 text::NoiseConfig config, bool kaldi_text, bool normalize,
                 const std::string &spelling_rules, const GlobalOptions &g) {
  config.seed = g.seed;
  config.Validate();
  text::SpellingRules rules = text::SpellingRules::Defaults();
  if (!spelling_rules.empty()) {
    std::ifstream rin = OpenIn(spelling_rules);
    rules = text::SpellingRules::Parse(rin);
    normalize = true;
  }
  std::ifstream in = OpenIn(in_path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);

  std::vector<std::string> result(lines.size());
  ParallelFor(lines.size(), g.jobs, [&](std::size_t i) {
    text::Tokens tokens = text::Tokenize(lines[i]);
    std::string id;
    if (kaldi_text && !tokens.empty()) {
      id = tokens.front();
      tokens.erase(tokens.begin());
    }
    if (normalize) tokens = rules.Apply(tokens);
    tokens = text::InjectPartialWords(tokens, config, i);
    std::string body = text::Join(tokens);
    result[i] = id.empty() ? body : (body.empty() ? id : id + " " + body);
  });
  std::ofstream out = OpenOut(out_path);
  for (const std::string &line : result) out << line << '\n';
  return kExitOk;
}

int CmdScore(const std::string &ref_path, const std::string &hyp_path,
             const std::string &rules_path, bool per_utt, std::ostream &out) {
  const text::TokenFilterRules rules = LoadTokenRules(rules_path);
  const scoring::WerReport report = scoring::ModifiedWer(
      LoadTranscripts(ref_path), LoadTranscripts(hyp_path), rules);
  out << report.ToJson(per_utt).dump(2) << '\n';
  return kExitOk;
}

int CmdFilterCtm(const std::string &in_path, const std::string &out_path,
                 std::optional<double> threshold, const std::string &sweep_ref,
                 double grid_step, const std::string &rules_path,
                 std::ostream &out) {
  std::ifstream in = OpenIn(in_path);
  const std::vector<scoring::CtmEntry> entries = scoring::ParseCtm(in, in_path);
  nlohmann::json j;
  j["version"] = kVersion;
  double chosen = threshold.value_or(0.0);
  if (!sweep_ref.empty()) {
    const scoring::SweepResult sweep = scoring::SweepThreshold(
        entries, LoadTranscripts(sweep_ref), LoadTokenRules(rules_path),
        grid_step);
    chosen = sweep.best_threshold;
    j["best_threshold"] = sweep.best_threshold;
    j["best_wer"] = sweep.best_wer;
    nlohmann::json curve = nlohmann::json::array();
    for (const auto &[t, w] : sweep.curve) curve.push_back({t, w});
    j["curve"] = std::move(curve);
  }
  const std::vector<scoring::CtmEntry> kept =
      scoring::FilterCtm(entries, {chosen});
  std::ofstream ctm = OpenOut(out_path);
  scoring::WriteCtm(ctm, kept);
  j["threshold"] = chosen;
  j["n_in"] = entries.size();
  j["n_kept"] = kept.size();
  out << j.dump(2) << '\n';
  return kExitOk;
}

int CmdStats(const std::string &data_dir, const std::string &spk2group,
             double f_min, double f_max, const GlobalOptions &g,
             std::ostream &out, const Logger &log) {
  corpus::DataDir dir = corpus::LoadDataDir(data_dir);
  if (!spk2group.empty()) {
    std::ifstream in = OpenIn(spk2group);
    std::map<std::string, std::string> groups;
    for (std::string line; std::getline(in, line);) {
      text::Tokens t = text::Tokenize(line);
      if (t.empty()) continue;
      if (t.size() != 2 || !groups.emplace(t[0], t[1]).second)
        throw FormatError(spk2group + ": bad or duplicate line '" + line + "'");
    }
    dir.spk2group = std::move(groups);
    dir.Validate();
  }
  const corpus::CorpusStats stats =
      corpus::ComputeStats(dir, f_min, f_max, g.jobs);
  for (const std::string &w : stats.warnings) log.Warn(w);
  for (const auto &[utt, reason] : stats.skipped)
    log.Warn("skipped " + utt + ": " + reason);
  out << stats.ToJson().dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  GlobalOptions g;
  std::string log_level = "info";
  Logger log(err, g.log_level);

  CLI::App app{"prosokit: speech corpus augmentation and ASR scoring tools",
               "prosokit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  CLI::Option *seed_opt =
      app.add_option("--seed", g.seed,
                     "Random seed (default: $PROSOKIT_SEED, else 0)");
  app.add_option("--jobs,-j", g.jobs, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--log-level", log_level, "Log verbosity on stderr")
      ->capture_default_str()
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

  std::function<int()> action;

  // augment
  CLI::App *augment = app.add_subcommand(
      "augment", "Prosody augmentation of a Kaldi data dir");
  std::string aug_dir, aug_recipe, aug_out;
  RtisiFlags aug_flags;
  augment->add_option("--data-dir", aug_dir, "Input data directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  augment->add_option("--recipe", aug_recipe, "sr, p, sr-p or sr2-p2")
      ->required()
      ->check(CLI::IsMember({"sr", "p", "sr-p", "sr2-p2"}, CLI::ignore_case));
  augment->add_option("--out", aug_out, "Output data directory")->required();
  aug_flags.Add(*augment);
  augment->callback([&] {
    action = [&] {
      return CmdAugment(aug_dir, aug_recipe, aug_out, aug_flags, g, log);
    };
  });

  // tsm / pitch
  std::string mod_in, mod_out;
  double alpha = 1.0, factor = 1.0;
  RtisiFlags tsm_flags, pitch_flags;
  CLI::App *tsm = app.add_subcommand(
      "tsm", "Change speaking rate of one WAV (duration scales by 1/alpha)");
  tsm->add_option("--in", mod_in, "Input WAV")->required()->check(CLI::ExistingFile);
  tsm->add_option("--out", mod_out, "Output WAV")->required();
  tsm->add_option("--alpha", alpha, "Speaking-rate factor in [0.25, 4]")
      ->required()
      ->check(CLI::Range(0.25, 4.0));
  tsm_flags.Add(*tsm);
  tsm->callback([&] {
    action = [&] {
      return CmdModify(mod_in, mod_out, {prosody::ModKind::kTimeScale, alpha},
                       tsm_flags, g);
    };
  });
  CLI::App *pitch_cmd =
      app.add_subcommand("pitch", "Scale the pitch of one WAV by a factor");
  pitch_cmd->add_option("--in", mod_in, "Input WAV")
      ->required()
      ->check(CLI::ExistingFile);
  pitch_cmd->add_option("--out", mod_out, "Output WAV")->required();
  pitch_cmd->add_option("--factor", factor, "Pitch-scale factor in (0, 2]")
      ->required()
      ->check(CLI::Range(1e-6, 2.0));
  pitch_flags.Add(*pitch_cmd);
  pitch_cmd->callback([&] {
    action = [&] {
      return CmdModify(mod_in, mod_out, {prosody::ModKind::kPitchScale, factor},
                       pitch_flags, g);
    };
  });

  // track-pitch
  std::string tp_in, tp_out;
  pitch::PitchOptions tp_options;
  CLI::App *track = app.add_subcommand(
      "track-pitch", "Frame-level f0 of one WAV (CSV time,f0,voiced)");
  track->add_option("--in", tp_in, "Input WAV")->required()->check(CLI::ExistingFile);
  track->add_option("--out", tp_out, "Output CSV (optional)");
  track->add_option("--f-min", tp_options.f_min, "Lowest f0 in Hz")
      ->capture_default_str();
  track->add_option("--f-max", tp_options.f_max, "Highest f0 in Hz")
      ->capture_default_str();
  track->callback([&] {
    action = [&] { return CmdTrackPitch(tp_in, tp_out, tp_options, out); };
  });

  // specaug
  std::string sa_in, sa_out, sa_base = "ld";
  specaug::SpecAugPolicy policy;
  CLI::App *sa = app.add_subcommand(
      "specaug", "SpecAugment masking/warping of a Kaldi text feature archive");
  sa->add_option("--in", sa_in, "Input archive")->required()->check(CLI::ExistingFile);
  sa->add_option("--out", sa_out, "Output archive")->required();
  sa->add_option("--policy", sa_base,
                 "Base policy: ld (LibriSpeech double) or none")
      ->capture_default_str()
      ->check(CLI::IsMember({"ld", "none"}));
  std::optional<int> warp_w, freq_f, n_freq, time_t_, n_time;
  std::optional<double> time_p;
  sa->add_option("--time-warp", warp_w, "Time warp parameter W (frames)")
      ->check(CLI::NonNegativeNumber);
  sa->add_option("--freq-mask", freq_f, "Max frequency mask width F")
      ->check(CLI::NonNegativeNumber);
  sa->add_option("--num-freq-masks", n_freq, "Number of frequency masks")
      ->check(CLI::NonNegativeNumber);
  sa->add_option("--time-mask", time_t_, "Max time mask width T (frames)")
      ->check(CLI::NonNegativeNumber);
  sa->add_option("--num-time-masks", n_time, "Number of time masks")
      ->check(CLI::NonNegativeNumber);
  sa->add_option("--max-time-ratio", time_p,
                 "Upper bound p on the masked fraction of frames")
      ->check(CLI::Range(0.0, 1.0));
  sa->callback([&] {
    action = [&] {
      specaug::SpecAugPolicy p = sa_base == "ld"
                                     ? specaug::SpecAugPolicy::LibriSpeechDouble()
                                     : specaug::SpecAugPolicy{};
      if (warp_w) p.time_warp_w = *warp_w;
      if (freq_f) p.freq_mask_f = *freq_f;
      if (n_freq) p.n_freq_masks = *n_freq;
      if (time_t_) p.time_mask_t = *time_t_;
      if (n_time) p.n_time_masks = *n_time;
      if (time_p) p.max_time_mask_ratio = *time_p;
      return CmdSpecAug(sa_in, sa_out, p, g, log);
    };
  });

  // noise-text
  std::string nt_in, nt_out, nt_rules;
  text::NoiseConfig noise;
  bool kaldi_text = false, normalize = false;
  CLI::App *nt = app.add_subcommand(
      "noise-text", "Inject partial-word false starts into LM text");
  nt->add_option("--in", nt_in, "Input corpus")->required()->check(CLI::ExistingFile);
  nt->add_option("--out", nt_out, "Output corpus")->required();
  nt->add_option("--probability", noise.word_probability,
                 "Per-word injection probability")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  nt->add_option("--min-length", noise.min_word_length,
                 "Minimum eligible word length (>= 3)")
      ->capture_default_str()
      ->check(CLI::Range(3, 1 << 20));
  nt->add_flag("--kaldi-text", kaldi_text,
               "Lines start with an utterance id that is left untouched");
  nt->add_flag("--normalize", normalize,
               "Apply spelling normalization (favorite->favourite, ...) first");
  nt->add_option("--spelling-rules", nt_rules,
                 "Spelling rules file (match<TAB>replacement); implies "
                 "--normalize")
      ->check(CLI::ExistingFile);
  nt->callback([&] {
    action = [&] {
      return CmdNoiseText(nt_in, nt_out, noise, kaldi_text, normalize,
                          nt_rules, g);
    };
  });

  // score
  std::string sc_ref, sc_hyp, sc_rules;
  bool per_utt = false;
  CLI::App *score =
      app.add_subcommand("score", "Token-filtered (modified) WER as JSON");
  score->add_option("--ref", sc_ref, "Reference transcripts")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--hyp", sc_hyp, "Hypothesis transcripts")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--rules", sc_rules, "Token filter rules file")
      ->check(CLI::ExistingFile);
  score->add_flag("--per-utt", per_utt, "Include per-utterance alignments");
  score->callback([&] {
    action = [&] { return CmdScore(sc_ref, sc_hyp, sc_rules, per_utt, out); };
  });

  // filter-ctm
  std::string fc_in, fc_out, fc_sweep, fc_rules;
  std::optional<double> fc_threshold;
  double grid_step = 0.01;
  CLI::App *fc = app.add_subcommand(
      "filter-ctm", "Drop low-confidence CTM words, optionally sweeping the "
                    "threshold against a reference");
  fc->add_option("--in", fc_in, "Input CTM")->required()->check(CLI::ExistingFile);
  fc->add_option("--out", fc_out, "Filtered CTM")->required();
  CLI::Option *thr =
      fc->add_option("--threshold", fc_threshold, "Keep confidence >= this")
          ->check(CLI::Range(0.0, 1.0));
  CLI::Option *sweep =
      fc->add_option("--sweep", fc_sweep,
                     "Reference transcripts; pick the best threshold")
          ->check(CLI::ExistingFile);
  thr->excludes(sweep);
  fc->add_option("--grid-step", grid_step, "Sweep grid step")
      ->capture_default_str()
      ->check(CLI::Range(1e-6, 1.0));
  fc->add_option("--rules", fc_rules, "Token filter rules file")
      ->check(CLI::ExistingFile);
  fc->callback([&] {
    action = [&] {
      return CmdFilterCtm(fc_in, fc_out, fc_threshold, fc_sweep, grid_step,
                          fc_rules, out);
    };
  });

  // stats
  std::string st_dir, st_groups;
  double f_min = 100.0, f_max = 500.0;
  CLI::App *stats = app.add_subcommand(
      "stats", "Word/speaker/duration totals and per-group rate and pitch");
  stats->add_option("--data-dir", st_dir, "Data directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  stats->add_option("--spk2group", st_groups,
                    "speaker -> group table (overrides <data-dir>/spk2group)")
      ->check(CLI::ExistingFile);
  stats->add_option("--f-min", f_min, "Lowest f0 in Hz")->capture_default_str();
  stats->add_option("--f-max", f_max, "Highest f0 in Hz")->capture_default_str();
  stats->callback([&] {
    action = [&] {
      return CmdStats(st_dir, st_groups, f_min, f_max, g, out, log);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (log_level == "error") g.log_level = LogLevel::kError;
  else if (log_level == "warn") g.log_level = LogLevel::kWarn;
  else if (log_level == "debug") g.log_level = LogLevel::kDebug;
  else g.log_level = LogLevel::kInfo;

  if (seed_opt->count() == 0) {
    if (const char *env = std::getenv("PROSOKIT_SEED")) {
      try {
        std::size_t used = 0;
        g.seed = std::stoull(env, &used);
        if (env[used] != '\0') throw std::invalid_argument(env);
      } catch (const std::exception &) {
        log.Error(std::string("PROSOKIT_SEED is not an integer: ") + env);
        return kExitUsage;
      }
    }
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const std::exception &e) {
    log.Error(e.what());
    return kExitFatal;
  }
}

}  // namespace prosokit::cli
