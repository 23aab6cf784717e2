// include/prosokit/error.h

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

#ifndef PROSOKIT_ERROR_H_
#define PROSOKIT_ERROR_H_

#include <stdexcept>
#include <string>

namespace prosokit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or record (WAV header, CTM line, Kaldi table, ...).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input in an encoding we do not handle (non-PCM, 24-bit, ...).
class UnsupportedFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Invalid parameters, e.g. a window/hop pair that is not overlap-add
/// consistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The input is valid but the requested operation has no meaningful result
/// on it (all-zero target, output shorter than one frame, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Corpus directory whose tables disagree with each other.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace prosokit

#endif  // PROSOKIT_ERROR_H_
