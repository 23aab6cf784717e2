// src/specaug.cc

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

#include "prosokit/specaug.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "prosokit/error.h"
#include "prosokit/random.h"
#include "prosokit/text.h"

namespace prosokit::specaug {

SpecAugPolicy SpecAugPolicy::LibriSpeechDouble() {
  SpecAugPolicy p;
  p.time_warp_w = 80;
  p.freq_mask_f = 27;
  p.n_freq_masks = 2;
  p.time_mask_t = 100;
  p.n_time_masks = 2;
  p.max_time_mask_ratio = 1.0;
  return p;
}

void SpecAugPolicy::Validate() const {
  if (time_warp_w < 0 || freq_mask_f < 0 || n_freq_masks < 0 ||
      time_mask_t < 0 || n_time_masks < 0)
    throw ConfigError("specaug: policy parameters must be nonnegative");
  if (!(max_time_mask_ratio >= 0.0 && max_time_mask_ratio <= 1.0))
    throw ConfigError("specaug: max_time_mask_ratio must be in [0, 1]");
}

Matrix<double> TimeWarp(const Matrix<double> &frames, int anchor,
                        int displacement) {
  const auto num = static_cast<int>(frames.rows());
  const int target = anchor + displacement;
  if (num < 2 || anchor <= 0 || anchor >= num - 1 || target < 0 ||
      target > num - 1)
    throw ConfigError("time warp: anchor/displacement out of range");
  const int last = num - 1;
  Matrix<double> out(frames.rows(), frames.cols());
  for (int i = 0; i < num; ++i) {
    double src;
    if (i == last) {
      src = last;
    } else if (i <= target) {
      src = target == 0 ? 0.0
                        : static_cast<double>(i) * anchor / target;
    } else {
      src = anchor + static_cast<double>(i - target) * (last - anchor) /
                         (last - target);
    }
    const auto lo = std::min(static_cast<int>(std::floor(src)), last);
    const double frac = src - lo;
    auto dst = out.row(i);
    auto a = frames.row(lo);
    if (frac == 0.0 || lo == last) {
      std::copy(a.begin(), a.end(), dst.begin());
      continue;
    }
    auto b = frames.row(lo + 1);
    for (std::size_t k = 0; k < dst.size(); ++k)
      dst[k] = (1.0 - frac) * a[k] + frac * b[k];
  }
  return out;
}

SpecAugResult SpecAugment(const FeatureMatrix &features,
                          const SpecAugPolicy &policy, std::uint64_t seed) {
  policy.Validate();
  for (double v : features.frames.data())
    if (!std::isfinite(v)) throw FormatError("specaug: non-finite feature");

  SpecAugResult result;
  result.features = features;
  Matrix<double> &m = result.features.frames;
  const auto num = static_cast<std::int64_t>(m.rows());
  const auto dim = static_cast<std::int64_t>(m.cols());
  Rng rng(seed);

  const std::int64_t w = policy.time_warp_w;
  if (w > 0) {
    if (num > 2 * w) {
      const std::int64_t anchor = rng.UniformInt(w, num - w - 1);
      const std::int64_t disp = rng.UniformInt(-w, w);
      result.warp_applied = true;
      result.warp_anchor = static_cast<int>(anchor);
      result.warp_displacement = static_cast<int>(disp);
      if (disp != 0)
        m = TimeWarp(m, static_cast<int>(anchor), static_cast<int>(disp));
    } else {
      result.warp_skipped = true;
    }
  }

  if (dim > 0) {
    for (int n = 0; n < policy.n_freq_masks; ++n) {
      const std::int64_t width =
          rng.UniformInt(0, std::min<std::int64_t>(policy.freq_mask_f, dim));
      const std::int64_t start = rng.UniformInt(0, dim - width);
      for (std::int64_t t = 0; t < num; ++t)
        for (std::int64_t f = start; f < start + width; ++f) m(t, f) = 0.0;
      result.freq_masks.push_back({static_cast<int>(start),
                                   static_cast<int>(width)});
    }
  }

  const auto budget = static_cast<std::int64_t>(
      std::floor(policy.max_time_mask_ratio * static_cast<double>(num)));
  const std::int64_t cap = std::min<std::int64_t>(policy.time_mask_t, budget);
  std::int64_t used = 0;
  for (int n = 0; n < policy.n_time_masks && num > 0; ++n) {
    std::int64_t width = rng.UniformInt(0, cap);
    // The union of masks never exceeds the sum of widths, so capping the
    // running sum bounds the masked frame count.
    width = std::min(width, budget - used);
    const std::int64_t start = rng.UniformInt(0, num - width);
    for (std::int64_t t = start; t < start + width; ++t)
      for (std::int64_t f = 0; f < dim; ++f) m(t, f) = 0.0;
    used += width;
    result.time_masks.push_back({static_cast<int>(start),
                                 static_cast<int>(width)});
  }
  return result;
}

FeatureArchive ReadKaldiTextArchive(std::istream &in) {
  FeatureArchive archive;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string &msg) {
    throw FormatError("feature archive line " + std::to_string(line_no) +
                      ": " + msg);
  };
  std::string key;
  std::vector<std::vector<double>> rows;
  bool in_matrix = false;

  auto finish = [&]() {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix<double> m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) fail("ragged matrix '" + key + "'");
      std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    archive.emplace_back(key, std::move(m));
    rows.clear();
    in_matrix = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    text::Tokens tok = text::Tokenize(line);
    std::size_t pos = 0;
    if (!in_matrix) {
      if (tok.empty()) continue;
      key = tok[0];
      if (tok.size() < 2 || tok[1] != "[") fail("expected '" + key + " ['");
      in_matrix = true;
      pos = 2;
      if (pos == tok.size()) continue;
    }
    std::vector<double> row;
    bool closed = false;
    for (; pos < tok.size(); ++pos) {
      if (tok[pos] == "]") {
        if (pos + 1 != tok.size()) fail("trailing tokens after ']'");
        closed = true;
        break;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok[pos], &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != tok[pos].size()) fail("bad number '" + tok[pos] + "'");
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
    if (closed) finish();
  }
  if (in_matrix) fail("unterminated matrix '" + key + "'");
  return archive;
}

void WriteKaldiTextArchive(std::ostream &out, const FeatureArchive &archive) {
  char buf[32];
  for (const auto &[key, m] : archive) {
    out << key << "  [";
    if (m.rows() == 0) {
      out << " ]\n";
      continue;
    }
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
      out << ' ';
      for (double v : m.row(r)) {
        std::snprintf(buf, sizeof buf, " %.9g", v);
        out << buf;
      }
      out << (r + 1 == m.rows() ? " ]\n" : " \n");
    }
  }
}

}  // namespace prosokit::specaug
