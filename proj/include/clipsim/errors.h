// Copyright 2026 The clipsim Authors
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

#ifndef CLIPSIM_ERRORS_H_
#define CLIPSIM_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace clipsim {

// A numeric argument outside its documented domain (tau <= 0, alpha not in
// (0,1), ...).
class InvalidParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Optimizer state whose shape does not match the problem.
class StateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent problem or run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A closed form was requested outside the regime where it holds.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UnsupportedDatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a diagnostic needs f* and the problem does not know it.
class DiagnosticUnavailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A non-finite value appeared in the optimizer state.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(std::uint64_t step)
      : std::runtime_error("non-finite optimizer state at step " +
                           std::to_string(step)),
        step_(step) {}
  std::uint64_t step() const { return step_; }

 private:
  std::uint64_t step_;
};

}  // namespace clipsim

#endif  // CLIPSIM_ERRORS_H_
