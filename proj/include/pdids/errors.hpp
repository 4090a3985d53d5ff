// Copyright 2026 The pdids Authors
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

#ifndef PDIDS_ERRORS_HPP_
#define PDIDS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace pdids {

// Bad input data or a violated precondition: wrong dimensions, invalid
// configuration, unsupported function kinds. Maps to CLI exit code 2.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative routine failed to reach its tolerance. Maps to exit code 1.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
  NumericalError(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}

  double last_estimate() const { return last_estimate_; }

 private:
  double last_estimate_ = 0.0;
};

// Malformed file content. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")"
                                    : what),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace pdids

#endif  // PDIDS_ERRORS_HPP_
