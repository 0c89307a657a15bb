// Copyright 2026 The tocomm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOCOMM_ERRORS_H_
#define TOCOMM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace tocomm {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation (e.g. log of a
// non-positive entry).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A NaN or Inf appeared in a computed value.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Operation invoked in the wrong state (stale graph, missing gradient, ...).
class StateError : public Error {
 public:
  using Error::Error;
};

// Input that an operation cannot process meaningfully, e.g. a zero-norm row
// that must be rescaled.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration. key() names the offending setting when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message, std::string key = {})
      : Error(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Malformed file contents. offset() is a byte offset for binary formats and a
// 1-based line number for text formats.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// A search space exceeds the configured enumeration limit.
class SizeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tocomm

#endif  // TOCOMM_ERRORS_H_
