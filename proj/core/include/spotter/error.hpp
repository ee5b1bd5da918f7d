/* Copyright 2026 The Spotter Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>

namespace spotter {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tensor or layer received operands whose shapes do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A precondition on a scalar argument was violated.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The file system refused a read or a write.
class IoError : public Error {
 public:
  using Error::Error;
};

enum class FormatErrc {
  kBadMagic,
  kTruncated,
  kDimensionMismatch,
  kUnknownLayerTag,
  kBadValue,
};

const char* to_string(FormatErrc code);

/// An on-disk container (dataset, model, PGM, CSV) failed to decode.
class FormatError : public Error {
 public:
  FormatError(FormatErrc code, const std::string& detail)
      : Error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  FormatErrc code() const noexcept { return code_; }

 private:
  FormatErrc code_;
};

}  // namespace spotter
