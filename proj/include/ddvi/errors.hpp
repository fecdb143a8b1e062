// Copyright 2026 The ddvi Authors
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

#ifndef DDVI_ERRORS_HPP_
#define DDVI_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ddvi {

// Values double as process exit codes for the CLI.
enum class ErrorCode : int {
  kConfig = 2,
  kRankDeficient = 3,
  kNotConverged = 4,
  kNumerical = 5,
  kIo = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCode::kConfig, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

class RankDeficient : public Error {
 public:
  RankDeficient(const std::string& what, long rank, long required)
      : Error(ErrorCode::kRankDeficient,
              what + " (numerical rank " + std::to_string(rank) + " < " +
                  std::to_string(required) + ")"),
        rank_(rank),
        required_(required) {}
  long rank() const noexcept { return rank_; }
  long required() const noexcept { return required_; }

 private:
  long rank_;
  long required_;
};

class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, long iterations)
      : Error(ErrorCode::kNotConverged, what), iterations_(iterations) {}
  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::kNumerical, what) {}
};

// A structural assumption of the control problem does not hold for the given
// matrices (stabilizability, observability, regulator rank condition).
class AssumptionViolated : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ddvi

#endif  // DDVI_ERRORS_HPP_
