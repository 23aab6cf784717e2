// tests/dsp_test.cc

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

#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>

#include "doctest.h"
#include "oracles.h"
#include "prosokit/audio.h"
#include "prosokit/error.h"
#include "prosokit/fft.h"
#include "prosokit/stft.h"

using namespace prosokit;
using namespace prosokit::dsp;
using prosokit::testing::TempDir;

namespace {

// Hand-built WAV image with arbitrary header fields.
std::vector<std::uint8_t> RawWav(std::uint16_t format, std::uint16_t channels,
                                 std::uint16_t bits,
                                 const std::vector<std::int16_t> &samples,
                                 bool junk_chunk = false) {
  std::vector<std::uint8_t> b;
  auto u16 = [&](std::uint16_t v) {
    b.push_back(v & 0xFF);
    b.push_back(v >> 8);
  };
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xFF);
  };
  auto tag = [&](const char *t) { b.insert(b.end(), t, t + 4); };
  tag("RIFF");
  u32(0);
  tag("WAVE");
  if (junk_chunk) {
    tag("LIST");
    u32(3);
    b.insert(b.end(), {'a', 'b', 'c', 0});
  }
  tag("fmt ");
  u32(16);
  u16(format);
  u16(channels);
  u32(16000);
  u32(16000 * channels * bits / 8);
  u16(channels * bits / 8);
  u16(bits);
  tag("data");
  u32(static_cast<std::uint32_t>(samples.size() * 2));
  for (std::int16_t s : samples) u16(static_cast<std::uint16_t>(s));
  return b;
}

}  // namespace

TEST_SUITE("wav") {
  TEST_CASE("header arithmetic and scaling") {
    TempDir dir("wav");
    const auto path = dir / "a.wav";
    WriteWav(AudioBuffer(std::vector<double>(16000, 0.0), 16000), path);
    const WavInfo info = ReadWavInfo(path);
    CHECK(info.sample_rate == 16000);
    CHECK(info.frames == 16000);
    CHECK(info.channels == 1);
    CHECK(ReadWav(path).size() == 16000);

    const AudioBuffer a = DecodeWav(RawWav(1, 1, 16, {32767, -32768}));
    CHECK(a.samples[0] == doctest::Approx(32767.0 / 32768.0).epsilon(1e-12));
    CHECK(a.samples[1] == -1.0);
  }

  TEST_CASE("stereo is averaged to mono and flagged") {
    std::vector<std::int16_t> interleaved;
    for (int i = 0; i < 100; ++i) {
      interleaved.push_back(16384);
      interleaved.push_back(-16384);
    }
    const AudioBuffer a = DecodeWav(RawWav(1, 2, 16, interleaved));
    CHECK(a.size() == 100);
    CHECK(a.downmixed());
    for (double v : a.samples) CHECK(v == 0.0);
  }

  TEST_CASE("unknown chunks are skipped") {
    const AudioBuffer a = DecodeWav(RawWav(1, 1, 16, {1, 2, 3}, true));
    CHECK(a.size() == 3);
  }

  TEST_CASE("unsupported encodings name the field") {
    try {
      DecodeWav(RawWav(3, 1, 16, {0}));
      FAIL("float accepted");
    } catch (const UnsupportedFormatError &e) {
      CHECK(std::string(e.what()).find("audio_format") != std::string::npos);
    }
    try {
      DecodeWav(RawWav(1, 1, 8, {0}));
      FAIL("8-bit accepted");
    } catch (const UnsupportedFormatError &e) {
      CHECK(std::string(e.what()).find("bits_per_sample") != std::string::npos);
    }
    std::vector<std::uint8_t> bad = RawWav(1, 1, 16, {0});
    std::memcpy(bad.data(), "RIFX", 4);
    CHECK_THROWS_AS(DecodeWav(bad), FormatError);
    std::vector<std::uint8_t> cut = RawWav(1, 1, 16, {0, 1, 2, 3});
    cut.resize(cut.size() - 4);
    CHECK_THROWS_AS(DecodeWav(cut), FormatError);
  }

  TEST_CASE("write/read round trip within one quantization step") {
    TempDir dir("wav");
    const AudioBuffer tone = testing::Tone(440.0, 0.5, 0.9);
    WriteWav(tone, dir / "t.wav");
    const AudioBuffer back = ReadWav(dir / "t.wav");
    REQUIRE(back.size() == tone.size());
    CHECK(testing::MaxAbsDiff(tone.samples, back.samples) <= 1.0 / 32768.0);
  }

  TEST_CASE("out-of-range values are clamped") {
    const AudioBuffer a =
        DecodeWav(EncodeWav(AudioBuffer({2.0, -3.0, 0.25}, 16000)));
    CHECK(a.samples[0] == 32767.0 / 32768.0);
    CHECK(a.samples[1] == -1.0);
    CHECK(a.samples[2] == 0.25);
  }

  TEST_CASE("empty buffer writes a valid zero-length file") {
    TempDir dir("wav");
    WriteWav(AudioBuffer({}, 8000), dir / "e.wav");
    const AudioBuffer a = ReadWav(dir / "e.wav");
    CHECK(a.empty());
    CHECK(a.sample_rate == 8000);
  }

  TEST_CASE("non-finite samples are rejected") {
    CHECK_THROWS_AS(EncodeWav(AudioBuffer({std::nan("")}, 16000)), FormatError);
    CHECK_THROWS_AS(AudioBuffer({1.0}, 0).Validate(), ConfigError);
  }
}

TEST_SUITE("stft") {
  TEST_CASE("frame count formula") {
    StftConfig c;
    c.frame_length = 400;
    c.analysis_hop = c.synthesis_hop = 160;
    c.fft_size = 512;
    const ComplexSpectrogram s =
        Stft(AudioBuffer(std::vector<double>(1600, 0.1), 16000), c);
    CHECK(s.num_frames() == 10);
    CHECK(s.frames.cols() == 257);
  }

  TEST_CASE("default config for 16 kHz") {
    const StftConfig c = StftConfig::ForSampleRate(16000);
    CHECK(c.frame_length == 512);
    CHECK(c.analysis_hop == 128);
    CHECK(c.fft_size == 512);
    CHECK(c.window == WindowType::kHann);
    const StftConfig c8 = StftConfig::ForSampleRate(8000);
    CHECK(c8.frame_length == 256);
    CHECK(c8.fft_size == 256);
  }

  TEST_CASE("zero audio gives zero frames") {
    const ComplexSpectrogram s =
        Stft(AudioBuffer(std::vector<double>(2000, 0.0), 16000), StftConfig{});
    for (auto z : s.frames.data()) CHECK(z == std::complex<double>(0.0));
    const AudioBuffer back = Istft(s);
    for (double v : back.samples) CHECK(v == 0.0);
  }

  TEST_CASE("bin-centred tone with rectangular window stays in its bin") {
    StftConfig c;
    c.window = WindowType::kRectangular;
    const int k = 20;
    const AudioBuffer tone =
        testing::Tone(k * 16000.0 / c.fft_size, 1.0, 0.5);
    const ComplexSpectrogram s = Stft(tone, c);
    // An interior frame sees a full window of the tone.
    auto row = s.frames.row(s.num_frames() / 2);
    double total = 0.0;
    for (auto z : row) total += std::norm(z);
    CHECK(std::norm(row[k]) >= 0.99 * total);
  }

  TEST_CASE("Parseval: one-sided spectrum energy equals windowed frame energy") {
    const StftConfig c;
    const AudioBuffer x = testing::Noise(3, 4000);
    const ComplexSpectrogram s = Stft(x, c);
    const std::vector<double> w = MakeWindow(c.window, c.frame_length);
    for (std::size_t t = 0; t < s.num_frames(); t += 5) {
      double time_energy = 0.0;
      for (int i = 0; i < c.frame_length; ++i) {
        const auto idx = static_cast<std::ptrdiff_t>(t * c.analysis_hop) -
                         c.pad() + i;
        if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(x.size()))
          time_energy += std::pow(x.samples[idx] * w[i], 2);
      }
      double freq_energy = 0.0;
      auto row = s.frames.row(t);
      for (std::size_t k = 0; k < row.size(); ++k)
        freq_energy += (k == 0 || k + 1 == row.size() ? 1.0 : 2.0) *
                       std::norm(row[k]);
      freq_energy /= c.fft_size;
      CHECK(freq_energy == doctest::Approx(time_energy).epsilon(1e-6));
    }
  }

  TEST_CASE("round trip on tones, noise and COLA configurations") {
    const AudioBuffer tone = testing::Tone(440.0, 1.0);
    CHECK(testing::MaxAbsDiff(Istft(Stft(tone, StftConfig{})).samples,
                              tone.samples) <= 1e-6);
    const AudioBuffer noise = testing::Noise(11, 12345);
    const AudioBuffer back = Istft(Stft(noise, StftConfig{}));
    CHECK(back.size() == noise.size());
    CHECK(testing::MaxAbsDiff(back.samples, noise.samples) <= 1e-6);

    struct Case {
      WindowType w;
      int n, hop, fft;
    };
    for (Case k : {Case{WindowType::kHann, 400, 100, 512},
                   Case{WindowType::kHann, 256, 64, 256},
                   Case{WindowType::kRectangular, 256, 128, 256},
                   Case{WindowType::kRectangular, 256, 128, 512},
                   Case{WindowType::kHann, 512, 128, 1024}}) {
      StftConfig c;
      c.window = k.w;
      c.frame_length = k.n;
      c.analysis_hop = c.synthesis_hop = k.hop;
      c.fft_size = k.fft;
      REQUIRE(c.IsCola(k.hop));
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const AudioBuffer x = testing::Noise(seed, 3000 + 17 * seed);
        CHECK(testing::MaxAbsDiff(Istft(Stft(x, c)).samples, x.samples) <=
              1e-6);
      }
    }
  }

  TEST_CASE("non-COLA synthesis is a configuration error") {
    StftConfig c;
    c.window = WindowType::kHann;
    c.frame_length = 512;
    c.analysis_hop = c.synthesis_hop = 300;
    CHECK_FALSE(c.IsCola(300));
    const ComplexSpectrogram s = Stft(testing::Noise(1, 2000), c);
    CHECK_THROWS_AS(Istft(s), ConfigError);
  }

  TEST_CASE("config validation") {
    StftConfig c;
    c.analysis_hop = 0;
    CHECK_THROWS_AS(c.Validate(), ConfigError);
    c = StftConfig{};
    c.synthesis_hop = 1000;
    CHECK_THROWS_AS(c.Validate(), ConfigError);
    c = StftConfig{};
    c.fft_size = 256;
    CHECK_THROWS_AS(c.Validate(), ConfigError);
    CHECK_THROWS_AS(Stft(AudioBuffer({}, 16000), StftConfig{}),
                    DegenerateInputError);
    CHECK(ParseWindowType("hamming") == WindowType::kHamming);
    CHECK_THROWS_AS(ParseWindowType("kaiser"), ConfigError);
  }

  TEST_CASE("magnitudes are non-negative with fft_size/2+1 columns") {
    StftConfig c;
    c.fft_size = 1024;
    const MagnitudeSpectrogram m = Magnitude(Stft(testing::Noise(2, 5000), c));
    CHECK(m.frames.cols() == 513);
    for (double v : m.frames.data()) CHECK(v >= 0.0);
  }

  TEST_CASE("spectral convergence") {
    const AudioBuffer x = testing::SpeechLike(1, 1.0);
    const MagnitudeSpectrogram m = Magnitude(Stft(x, StftConfig{}));
    CHECK(SpectralConvergence(m, x) <= 1e-9);
    CHECK(SpectralConvergence(m, AudioBuffer(std::vector<double>(x.size(), 0.0),
                                             16000)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    const MagnitudeSpectrogram zero =
        Magnitude(Stft(AudioBuffer(std::vector<double>(x.size(), 0.0), 16000),
                       StftConfig{}));
    CHECK_THROWS_AS(SpectralConvergence(zero, x), DegenerateInputError);
    CHECK_THROWS_AS(SpectralConvergence(m, testing::Noise(1, 100)), ConfigError);
  }
}

TEST_SUITE("fft") {
  TEST_CASE("forward matches a direct DFT and inverse undoes it") {
    const int n = 48;
    RealFft fft(n);
    std::vector<double> x(n), back(n);
    for (int i = 0; i < n; ++i) x[i] = std::sin(0.3 * i * i) + 0.1 * i;
    std::vector<std::complex<double>> X(n / 2 + 1);
    fft.Forward(x, X);
    for (int k = 0; k <= n / 2; ++k) {
      std::complex<double> direct = 0.0;
      for (int i = 0; i < n; ++i)
        direct += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * k * i / n);
      CHECK(std::abs(X[k] - direct) < 1e-9);
    }
    fft.Inverse(X, back);
    CHECK(testing::MaxAbsDiff(x, back) < 1e-12);
  }

  TEST_CASE("pack/unpack puts the frame centre at index 0") {
    std::vector<double> frame{1, 2, 3, 4}, buf(8), out(4);
    PackFrame(frame, buf);
    CHECK(buf == std::vector<double>{3, 4, 0, 0, 0, 0, 1, 2});
    UnpackFrame(buf, out);
    CHECK(out == frame);
  }
}
