// tests/specaug_test.cc

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

#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "prosokit/error.h"
#include "prosokit/specaug.h"

using namespace prosokit;
using namespace prosokit::specaug;

namespace {

FeatureMatrix RandomFeatures(std::uint64_t seed, std::size_t t, std::size_t d) {
  Rng rng(seed);
  FeatureMatrix f;
  f.frames = Matrix<double>(t, d);
  for (double &v : f.frames.data()) v = 1.0 + rng.Uniform01();
  return f;
}

}  // namespace

TEST_SUITE("specaug") {
  TEST_CASE("identity policy") {
    const FeatureMatrix f = RandomFeatures(1, 50, 13);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const SpecAugResult r = SpecAugment(f, SpecAugPolicy{}, seed);
      CHECK(r.features.frames == f.frames);
      CHECK_FALSE(r.warp_applied);
    }
  }

  TEST_CASE("one frequency mask is one contiguous run of at most F columns") {
    SpecAugPolicy p;
    p.freq_mask_f = 5;
    p.n_freq_masks = 1;
    const FeatureMatrix f = RandomFeatures(2, 30, 40);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const SpecAugResult r = SpecAugment(f, p, seed);
      std::vector<int> zero_cols;
      for (int c = 0; c < 40; ++c) {
        bool all_zero = true;
        for (int t = 0; t < 30; ++t) all_zero &= r.features.frames(t, c) == 0.0;
        if (all_zero) zero_cols.push_back(c);
      }
      CHECK(zero_cols.size() <= 5);
      for (std::size_t i = 1; i < zero_cols.size(); ++i)
        CHECK(zero_cols[i] == zero_cols[i - 1] + 1);
      REQUIRE(r.freq_masks.size() == 1);
      CHECK(static_cast<std::size_t>(r.freq_masks[0].width) == zero_cols.size());
    }
  }

  TEST_CASE("LD policy on all-ones leaves only exact zeros and ones") {
    FeatureMatrix f;
    f.frames = Matrix<double>(100, 40, 1.0);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const SpecAugResult r =
          SpecAugment(f, SpecAugPolicy::LibriSpeechDouble(), seed);
      for (double v : r.features.frames.data()) CHECK((v == 0.0 || v == 1.0));
      CHECK(r.warp_skipped);
    }
  }

  TEST_CASE("time budget, caps and shapes") {
    SpecAugPolicy p;
    p.time_mask_t = 40;
    p.n_time_masks = 4;
    p.max_time_mask_ratio = 0.2;
    p.freq_mask_f = 10;
    p.n_freq_masks = 3;
    const FeatureMatrix f = RandomFeatures(3, 120, 20);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const SpecAugResult r = SpecAugment(f, p, seed);
      CHECK(r.features.num_frames() == 120);
      CHECK(r.features.dim() == 20);
      int total = 0;
      for (const Mask &m : r.time_masks) {
        CHECK(m.width <= 40);
        CHECK(m.start + m.width <= 120);
        total += m.width;
      }
      CHECK(total <= 24);
      for (const Mask &m : r.freq_masks) {
        CHECK(m.width <= 10);
        CHECK(m.start + m.width <= 20);
      }
    }
  }

  TEST_CASE("short input skips the warp and still masks") {
    SpecAugPolicy p = SpecAugPolicy::LibriSpeechDouble();
    const FeatureMatrix f = RandomFeatures(4, 60, 13);
    const SpecAugResult r = SpecAugment(f, p, 5);
    CHECK(r.warp_skipped);
    CHECK_FALSE(r.warp_applied);
    CHECK(r.time_masks.size() == 2);
    CHECK(r.freq_masks.size() == 2);
  }

  TEST_CASE("warp anchors and displacements stay in range") {
    SpecAugPolicy p;
    p.time_warp_w = 5;
    const FeatureMatrix f = RandomFeatures(6, 30, 3);
    std::set<int> displacements;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const SpecAugResult r = SpecAugment(f, p, seed);
      REQUIRE(r.warp_applied);
      CHECK(r.warp_anchor >= 5);
      CHECK(r.warp_anchor < 25);
      CHECK(std::abs(r.warp_displacement) <= 5);
      displacements.insert(r.warp_displacement);
      // Endpoints are pinned.
      for (std::size_t c = 0; c < 3; ++c) {
        CHECK(r.features.frames(0, c) == f.frames(0, c));
        CHECK(r.features.frames(29, c) == f.frames(29, c));
      }
    }
    CHECK(displacements.size() == 11);
  }

  TEST_CASE("time warp moves the anchor row") {
    Matrix<double> m(11, 1);
    for (std::size_t t = 0; t < 11; ++t) m(t, 0) = static_cast<double>(t);
    const Matrix<double> w = TimeWarp(m, 5, 2);
    CHECK(w(7, 0) == doctest::Approx(5.0));
    CHECK(w(0, 0) == 0.0);
    CHECK(w(10, 0) == 10.0);
    for (std::size_t t = 1; t < 11; ++t) CHECK(w(t, 0) >= w(t - 1, 0));
    CHECK(TimeWarp(m, 5, 0) == m);
    CHECK_THROWS_AS(TimeWarp(m, 0, 1), ConfigError);
  }

  TEST_CASE("determinism and seed sensitivity") {
    const FeatureMatrix f = RandomFeatures(7, 200, 40);
    const SpecAugPolicy p = SpecAugPolicy::LibriSpeechDouble();
    std::set<std::vector<double>> distinct;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const SpecAugResult a = SpecAugment(f, p, seed);
      CHECK(a.features.frames == SpecAugment(f, p, seed).features.frames);
      auto d = a.features.frames.data();
      distinct.emplace(d.begin(), d.end());
    }
    CHECK(distinct.size() >= 99);
  }

  TEST_CASE("validation") {
    SpecAugPolicy p;
    p.n_time_masks = -1;
    CHECK_THROWS_AS(p.Validate(), ConfigError);
    p = SpecAugPolicy{};
    p.max_time_mask_ratio = 1.5;
    CHECK_THROWS_AS(p.Validate(), ConfigError);
    FeatureMatrix f = RandomFeatures(8, 5, 2);
    f.frames(0, 0) = std::nan("");
    CHECK_THROWS_AS(SpecAugment(f, SpecAugPolicy{}, 0), FormatError);
  }

  TEST_CASE("kaldi text archive round trip") {
    FeatureArchive a{{"utt1", RandomFeatures(9, 3, 4).frames},
                     {"utt2", RandomFeatures(10, 1, 4).frames}};
    std::ostringstream out;
    WriteKaldiTextArchive(out, a);
    std::istringstream in(out.str());
    const FeatureArchive b = ReadKaldiTextArchive(in);
    REQUIRE(b.size() == 2);
    CHECK(b[0].first == "utt1");
    CHECK(b[1].second.rows() == 1);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t k = 0; k < a[i].second.data().size(); ++k)
        CHECK(b[i].second.data()[k] ==
              doctest::Approx(a[i].second.data()[k]).epsilon(1e-8));

    std::istringstream inline_rows("u  [ 1 2\n 3 4 ]\n");
    const FeatureArchive c = ReadKaldiTextArchive(inline_rows);
    REQUIRE(c.size() == 1);
    CHECK(c[0].second.rows() == 2);
    CHECK(c[0].second(1, 1) == 4.0);
    std::istringstream ragged("u [\n 1 2\n 3 ]\n");
    CHECK_THROWS_AS(ReadKaldiTextArchive(ragged), FormatError);
    std::istringstream open("u [\n 1 2\n");
    CHECK_THROWS_AS(ReadKaldiTextArchive(open), FormatError);
  }
}
