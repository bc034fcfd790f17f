// Copyright 2026 The lqrgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace lqrgame {

// Process exit codes used by the CLI. Each error class below maps to one.
enum class ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kValidation = 2,
  kNonConvergence = 3,
  kCapacity = 4,
  kInstability = 5,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual ExitCode exit_code() const noexcept { return ExitCode::kInternal; }
};

// Inconsistent sizes between patterns, layouts, matrices or strategies.
class DimensionError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kValidation; }
};

// Malformed input files, invariant violations on ingestion, bad options.
class ValidationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kValidation; }
};

class CapacityError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kCapacity; }
};

// A closed-loop matrix that should be Hurwitz is not.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, double abscissa)
      : Error(what), abscissa_(abscissa) {}
  double abscissa() const noexcept { return abscissa_; }
  ExitCode exit_code() const noexcept override { return ExitCode::kInstability; }

 private:
  double abscissa_;
};

// No stabilizing gain exists (or none was found) for a system or a mask.
class StabilizabilityError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kInstability; }
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best_epsilon)
      : Error(what), best_epsilon_(best_epsilon) {}
  double best_epsilon() const noexcept { return best_epsilon_; }
  ExitCode exit_code() const noexcept override {
    return ExitCode::kNonConvergence;
  }

 private:
  double best_epsilon_;
};

int to_int(ExitCode code) noexcept;

}  // namespace lqrgame
