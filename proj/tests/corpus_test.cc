// tests/corpus_test.cc

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

#include <algorithm>

#include "doctest.h"
#include "oracles.h"
#include "prosokit/corpus.h"
#include "prosokit/error.h"
#include "prosokit/recipe.h"

using namespace prosokit;
using namespace prosokit::corpus;
using testing::TempDir;
using testing::WriteText;

namespace {

void ThreeUttDir(const std::filesystem::path &root) {
  std::filesystem::create_directories(root);
  dsp::WriteWav(testing::Tone(220, 1.0), root / "a.wav");
  dsp::WriteWav(testing::Tone(260, 1.0), root / "b.wav");
  dsp::WriteWav(testing::Tone(200, 0.5), root / "c.wav");
  WriteText(root / "wav.scp",
            "u1 " + (root / "a.wav").string() + "\nu2 " +
                (root / "b.wav").string() + "\nu3 c.wav\n");
  WriteText(root / "text", "u1 one two three four five\nu2 six seven eight "
                           "nine ten\nu3 hi\n");
  WriteText(root / "utt2spk", "u1 s1\nu2 s2\nu3 s3\n");
}

std::string ErrorText(const std::filesystem::path &root) {
  try {
    LoadDataDir(root);
  } catch (const std::exception &e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("datadir") {
  TEST_CASE("well-formed dir loads; relative paths resolve against the root") {
    TempDir tmp("corpus");
    ThreeUttDir(tmp.path());
    const DataDir d = LoadDataDir(tmp.path());
    CHECK(d.size() == 3);
    CHECK(d.AudioPath("u3") == tmp.path() / "c.wav");
    CHECK(d.Duration("u3") == doctest::Approx(0.5));
    CHECK(d.LoadAudio("u1").size() == 16000);
  }

  TEST_CASE("mismatched ids are listed") {
    TempDir tmp("corpus");
    ThreeUttDir(tmp.path());
    WriteText(tmp / "text", "u1 a\nu2 b\nu3 c\nu4 d\nu5 e\n");
    WriteText(tmp / "utt2spk", "u1 s\nu2 s\nu3 s\nu4 s\nu5 s\n");
    const std::string msg = ErrorText(tmp.path());
    CHECK(msg.find("wav.scp") != std::string::npos);
    CHECK(msg.find("u4") != std::string::npos);
    CHECK(msg.find("u5") != std::string::npos);
    CHECK_THROWS_AS(LoadDataDir(tmp.path()), ValidationError);
  }

  TEST_CASE("missing files, duplicates and pipes") {
    TempDir tmp("corpus");
    ThreeUttDir(tmp.path());
    std::filesystem::remove(tmp / "utt2spk");
    CHECK(ErrorText(tmp.path()).find("utt2spk") != std::string::npos);
    WriteText(tmp / "utt2spk", "u1 s1\nu2 s2\nu3 s3\nu1 s4\n");
    CHECK_THROWS_AS(LoadDataDir(tmp.path()), FormatError);
    WriteText(tmp / "utt2spk", "u1 s1\nu2 s2\nu3 s3\n");
    WriteText(tmp / "wav.scp", "u1 sox a.wav -t wav - |\nu2 b\nu3 c\n");
    const DataDir d = LoadDataDir(tmp.path());
    CHECK_THROWS_AS(d.LoadAudio("u1"), UnsupportedFormatError);
  }

  TEST_CASE("segments") {
    TempDir tmp("corpus");
    ThreeUttDir(tmp.path());
    WriteText(tmp / "wav.scp", "rec " + (tmp / "a.wav").string() + "\n");
    WriteText(tmp / "segments", "u1 rec 0.0 0.25\nu2 rec 0.25 0.5\nu3 rec 0.5 1.0\n");
    const DataDir d = LoadDataDir(tmp.path());
    CHECK(d.LoadAudio("u2").size() == 4000);
    CHECK(d.Duration("u3") == doctest::Approx(0.5));

    WriteText(tmp / "segments", "u1 rec 0.0 0.25\nu2 nope 0.25 0.5\nu3 rec 0.5 0.4\n");
    const std::string msg = ErrorText(tmp.path());
    CHECK(msg.find("unknown recording") != std::string::npos);
    CHECK(msg.find("u2") != std::string::npos);
    CHECK(msg.find("u3") != std::string::npos);
  }

  TEST_CASE("spk2utt must invert utt2spk, spk2group must not dangle") {
    TempDir tmp("corpus");
    ThreeUttDir(tmp.path());
    WriteText(tmp / "spk2utt", "s1 u1\ns2 u2\ns3 u3\n");
    CHECK_NOTHROW(LoadDataDir(tmp.path()));
    WriteText(tmp / "spk2utt", "s1 u1 u2\ns3 u3\n");
    CHECK_THROWS_AS(LoadDataDir(tmp.path()), ValidationError);
    std::filesystem::remove(tmp / "spk2utt");
    WriteText(tmp / "spk2group", "s1 A1\ns2 A1\nghost B1\n");
    CHECK(ErrorText(tmp.path()).find("ghost") != std::string::npos);
  }

  TEST_CASE("write and reload") {
    TempDir tmp("corpus");
    ThreeUttDir(tmp / "in");
    DataDir d = LoadDataDir(tmp / "in");
    d.spk2group = std::map<std::string, std::string>{{"s1", "A"}, {"s2", "B"}};
    WriteDataDir(d, tmp / "out");
    CHECK(testing::ReadText(tmp / "out" / "spk2utt") == "s1 u1\ns2 u2\ns3 u3\n");
    const DataDir back = LoadDataDir(tmp / "out");
    CHECK(back.text == d.text);
    CHECK(back.utt2spk == d.utt2spk);
    CHECK(back.spk2group == d.spk2group);
  }
}

TEST_SUITE("stats") {
  TEST_CASE("totals, rate and duration-weighted pitch") {
    TempDir tmp("stats");
    ThreeUttDir(tmp.path());
    DataDir d = LoadDataDir(tmp.path());
    d.text.erase("u3");
    d.utt2spk.erase("u3");
    d.wav_map.erase("u3");
    const CorpusStats s = ComputeStats(d);
    CHECK(s.n_words == 10);
    CHECK(s.n_speakers == 2);
    CHECK(s.duration_hours == doctest::Approx(2.0 / 3600));
    const GroupStats &g = s.per_group.at(kImplicitGroup);
    CHECK(g.words_per_second == doctest::Approx(5.0));
    REQUIRE(g.mean_pitch_hz);
    CHECK(*g.mean_pitch_hz == doctest::Approx(240.0).epsilon(3.0 / 240));
  }

  TEST_CASE("ten words over five seconds") {
    TempDir tmp("stats");
    std::filesystem::create_directories(tmp.path());
    dsp::WriteWav(testing::Tone(200, 5.0), tmp / "x.wav");
    WriteText(tmp / "wav.scp", "u x.wav\n");
    WriteText(tmp / "text", "u a b c d e f g h i j\n");
    WriteText(tmp / "utt2spk", "u s\n");
    const CorpusStats s = ComputeStats(LoadDataDir(tmp.path()));
    CHECK(s.per_group.at("all").words_per_second == doctest::Approx(2.0));
  }

  TEST_CASE("groups, empty groups and unreadable audio") {
    TempDir tmp("stats");
    ThreeUttDir(tmp.path());
    WriteText(tmp / "spk2group", "s1 A1\ns2 A2\ns3 A2\n");
    DataDir d = LoadDataDir(tmp.path());
    (*d.spk2group)["s1"] = "A1";
    d.wav_map["u1"] = (tmp / "missing.wav").string();
    const CorpusStats s = ComputeStats(d, 100, 500, 2);
    CHECK_FALSE(s.per_group.contains("A1"));
    REQUIRE(s.skipped.size() == 1);
    CHECK(s.skipped[0].first == "u1");
    CHECK(std::any_of(s.warnings.begin(), s.warnings.end(), [](auto &w) {
      return w.find("A1") != std::string::npos;
    }));
    CHECK(s.per_group.at("A2").n_utterances == 2);
    CHECK(s.per_group.at("A2").n_speakers == 2);
    CHECK(s.n_words == 11);
    const nlohmann::json j = s.ToJson();
    CHECK(j["groups"]["A2"]["n_words"] == 6);
  }

  TEST_CASE("group totals add up and order does not matter") {
    TempDir tmp("stats");
    testing::MakeFixtureDir(tmp.path(), 8, true, 0.4);
    const DataDir d = LoadDataDir(tmp.path());
    const CorpusStats s1 = ComputeStats(d, 100, 500, 1);
    const CorpusStats s4 = ComputeStats(d, 100, 500, 4);
    CHECK(s1.ToJson() == s4.ToJson());
    std::size_t words = 0;
    double seconds = 0.0;
    for (const auto &[name, g] : s1.per_group) {
      words += g.n_words;
      seconds += g.duration_s;
    }
    CHECK(words == s1.n_words);
    CHECK(seconds == doctest::Approx(s1.duration_hours * 3600));
  }
}

TEST_SUITE("apply-recipe") {
  TEST_CASE("multipliers, ids, manifest and revalidation") {
    TempDir tmp("recipe");
    testing::MakeFixtureDir(tmp / "in", 3, true, 0.3);
    const DataDir in = LoadDataDir(tmp / "in");
    const prosody::RecipeResult r = prosody::ApplyRecipe(
        in, prosody::AugmentRecipe::Parse("sr-p"), tmp / "out", {}, 7, 2);
    CHECK(r.failures == 0);
    CHECK(r.output.size() == 9);
    CHECK(r.output.utt2spk.contains("spk00-utt00-sr110"));
    CHECK(r.output.utt2spk.contains("spk00-utt00-p090"));
    CHECK(r.output.text.at("spk01-utt01-p090") == in.text.at("spk01-utt01"));
    const DataDir reloaded = LoadDataDir(tmp / "out");
    CHECK(reloaded.size() == 9);
    CHECK(reloaded.spk2group == in.spk2group);
    const std::string manifest = testing::ReadText(tmp / "out" / "manifest.csv");
    CHECK(manifest.rfind(std::string(prosody::kManifestHeader) + "\n", 0) == 0);
    CHECK(manifest.find("spk00-utt00-sr110,spk00-utt00,time-scale,1.1,ok,"
                        "wav/spk00-utt00-sr110.wav\n") != std::string::npos);
    CHECK(manifest.find("pitch-scale,0.9,ok") != std::string::npos);
    const dsp::AudioBuffer sped = reloaded.LoadAudio("spk00-utt00-sr110");
    CHECK(std::abs(static_cast<double>(sped.size()) -
                   in.LoadAudio("spk00-utt00").size() / 1.1) <= 256);
  }

  TEST_CASE("per-utterance failures are recorded, not fatal") {
    TempDir tmp("recipe");
    testing::MakeFixtureDir(tmp / "in", 2, false, 0.3);
    // The second utterance is too short to survive a time-scale change.
    dsp::WriteWav(testing::Tone(200, 0.02), tmp / "in" / "audio" / "spk01-utt01.wav");
    const prosody::RecipeResult r = prosody::ApplyRecipe(
        LoadDataDir(tmp / "in"), prosody::AugmentRecipe::Parse("sr"),
        tmp / "out", {}, 0);
    CHECK(r.failures == 1);
    CHECK(r.output.size() == 3);
    REQUIRE(r.manifest.size() == 2);
    CHECK(r.manifest[1].status.rfind("failed: ", 0) == 0);
    CHECK_FALSE(std::filesystem::exists(tmp / "out" / "wav" / "spk01-utt01-sr110.wav"));
    CHECK_NOTHROW(LoadDataDir(tmp / "out"));
  }

  TEST_CASE("segmented input gets one recording per copy") {
    TempDir tmp("recipe");
    std::filesystem::create_directories(tmp / "in");
    dsp::WriteWav(testing::SpeechLike(1, 1.0), tmp / "in" / "rec.wav");
    WriteText(tmp / "in" / "wav.scp", "rec rec.wav\n");
    WriteText(tmp / "in" / "segments", "a rec 0.0 0.5\nb rec 0.5 1.0\n");
    WriteText(tmp / "in" / "text", "a x y\nb z\n");
    WriteText(tmp / "in" / "utt2spk", "a s\nb s\n");
    const prosody::RecipeResult r = prosody::ApplyRecipe(
        LoadDataDir(tmp / "in"), prosody::AugmentRecipe::Parse("p"),
        tmp / "out", {}, 0);
    CHECK(r.failures == 0);
    const DataDir out = LoadDataDir(tmp / "out");
    CHECK(out.size() == 4);
    CHECK(out.segments->at("a-p090").recording == "a-p090");
    CHECK(out.LoadAudio("a-p090").size() == out.LoadAudio("a").size());
  }

  TEST_CASE("empty dir gives an empty output and a header-only manifest") {
    TempDir tmp("recipe");
    std::filesystem::create_directories(tmp / "in");
    for (const char *f : {"wav.scp", "text", "utt2spk"}) WriteText(tmp / "in" / f, "");
    const prosody::RecipeResult r = prosody::ApplyRecipe(
        LoadDataDir(tmp / "in"), prosody::AugmentRecipe::Parse("sr2-p2"),
        tmp / "out", {}, 0);
    CHECK(r.output.size() == 0);
    CHECK(testing::ReadText(tmp / "out" / "manifest.csv") ==
          std::string(prosody::kManifestHeader) + "\n");
  }
}
