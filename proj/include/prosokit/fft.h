// include/prosokit/fft.h

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

#ifndef PROSOKIT_FFT_H_
#define PROSOKIT_FFT_H_

#include <complex>
#include <span>

namespace prosokit::dsp {

/// Real-input DFT of a fixed size, backed by FFTW.
///
/// Plans are created once per size under a process-wide lock and shared;
/// Forward and Inverse are safe to call concurrently from any thread.
class RealFft {
 public:
  explicit RealFft(int size);

  int size() const { return size_; }
  int num_bins() const { return size_ / 2 + 1; }

  /// in.size() == size(), out.size() == num_bins().
  void Forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;

  /// Inverse DFT scaled by 1/size(), so Inverse(Forward(x)) == x.
  void Inverse(std::span<const std::complex<double>> in,
               std::span<double> out) const;

 private:
  int size_;
  void *forward_plan_;
  void *inverse_plan_;
};

}  // namespace prosokit::dsp

#endif  // PROSOKIT_FFT_H_
