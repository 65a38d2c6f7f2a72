// Copyright 2026 The mvsgd Authors. All Rights Reserved.
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

#ifndef MVSGD_ERRORS_H_
#define MVSGD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mvsgd {

// Precondition failures on public entry points.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A participant broke the round protocol (support outside the consensus
// mask, vote count driven below zero, mismatched aggregation masks).
class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bit stream could not be decoded under the expected layout.
class CorruptStream : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input for which the operation has no meaningful result, e.g. quantizing
// an all-zero vector.
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("config error: field '" + field + "': " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mvsgd

#endif  // MVSGD_ERRORS_H_
