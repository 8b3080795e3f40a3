// Copyright 2026 The pfcm Authors.
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

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pfcm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed data or arguments: dimension mismatches, non-finite values,
/// non-positive weights, too few points.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter outside its domain (e.g. fuzzifier m <= 1).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A parameter value that is well-formed but not supported, such as an
/// untabulated alpha.
class UnsupportedParameter : public Error {
 public:
  using Error::Error;
};

/// Input that is structurally valid but cannot produce a result, e.g. fewer
/// non-empty pooled centers than requested clusters.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Failure inside a pipeline stage. Carries the stage name and, for
/// combiner failures, the partition index.
class StageError : public Error {
 public:
  StageError(std::string stage, std::optional<std::size_t> partition,
             const std::string& message)
      : Error(format(stage, partition, message)),
        stage_(std::move(stage)),
        partition_(partition) {}

  const std::string& stage() const noexcept { return stage_; }
  std::optional<std::size_t> partition() const noexcept { return partition_; }

 private:
  static std::string format(const std::string& stage,
                            std::optional<std::size_t> partition,
                            const std::string& message) {
    std::string out = "[" + stage;
    if (partition) out += " partition " + std::to_string(*partition);
    return out + "] " + message;
  }

  std::string stage_;
  std::optional<std::size_t> partition_;
};

/// Raised when a run is aborted through its cancellation flag.
class Cancelled : public Error {
 public:
  using Error::Error;
};

}  // namespace pfcm
