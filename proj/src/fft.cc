// src/fft.cc

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

#include "prosokit/fft.h"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "prosokit/error.h"

namespace prosokit::dsp {

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW's planner is not thread-safe, execution with the new-array interface
// is. Plans live until process exit.
PlanPair GetPlans(int size) {
  static std::mutex mutex;
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(size);
  if (it != cache.end()) return it->second;

  std::vector<double> real(size);
  std::vector<std::complex<double>> spec(size / 2 + 1);
  auto *c = reinterpret_cast<fftw_complex *>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair plans{fftw_plan_dft_r2c_1d(size, real.data(), c, flags),
                 fftw_plan_dft_c2r_1d(size, c, real.data(),
                                      flags | FFTW_DESTROY_INPUT)};
  if (plans.forward == nullptr || plans.inverse == nullptr)
    throw Error("fftw: failed to create plan of size " + std::to_string(size));
  cache.emplace(size, plans);
  return plans;
}

}  // namespace

RealFft::RealFft(int size) : size_(size) {
  if (size < 1) throw ConfigError("fft size must be positive");
  PlanPair plans = GetPlans(size);
  forward_plan_ = plans.forward;
  inverse_plan_ = plans.inverse;
}

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) const {
  // r2c leaves its input untouched, so the const_cast is harmless.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_),
                       const_cast<double *>(in.data()),
                       reinterpret_cast<fftw_complex *>(out.data()));
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) const {
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex *>(scratch.data()),
                       out.data());
  const double scale = 1.0 / size_;
  for (double &v : out) v *= scale;
}

}  // namespace prosokit::dsp
