// Copyright 2026 The Sortition Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace sortition {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied a value that violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Arithmetic would leave the supported range (LCM cap, decimal scale, ...).
class OverflowError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Operation is not legal in the current protocol phase.
class StateError : public Error {
 public:
  using Error::Error;
};

// Serialized input could not be decoded. `offset` points at the first
// offending byte when the decoder knows it.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what,
                       std::optional<std::size_t> offset = std::nullopt)
      : Error(offset ? what + " (at byte " + std::to_string(*offset) + ")"
                     : what),
        offset_(offset) {}

  std::optional<std::size_t> offset() const { return offset_; }

 private:
  std::optional<std::size_t> offset_;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

// The OS entropy source or crypto backend could not be initialized.
class EntropyError : public Error {
 public:
  using Error::Error;
};

}  // namespace sortition
