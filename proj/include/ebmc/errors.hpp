// Copyright 2026 The ebmc Authors. All Rights Reserved.
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

#ifndef EBMC_ERRORS_HPP_
#define EBMC_ERRORS_HPP_

#include <optional>
#include <stdexcept>
#include <string>

namespace ebmc {

/// Bad arguments: empty observation sets, shape mismatches, out-of-range
/// configuration values.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimension precondition of a closed-form estimator violated (p - q - 1 <= 0).
class DimensionError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Y^T Y singular to working precision.
class RankDeficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A symmetric positive-definite factorization failed. Carries the EM
/// iteration index when raised from inside the solver loop.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what,
                          std::optional<int> iteration = std::nullopt)
      : std::runtime_error(iteration ? what + " (iteration " +
                                           std::to_string(*iteration) + ")"
                                     : what),
        iteration_(iteration) {}

  std::optional<int> iteration() const { return iteration_; }

 private:
  std::optional<int> iteration_;
};

/// Malformed triple file. `line` is 1-based, 0 when not line-specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                          what
                                    : what),
        line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace ebmc

#endif  // EBMC_ERRORS_HPP_
