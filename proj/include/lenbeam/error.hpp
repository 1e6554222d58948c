// Copyright 2026 The lenbeam Authors.
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

#include <stdexcept>
#include <string>

namespace lenbeam {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid construction parameters: bad vocabularies, unnormalized tables,
// mismatched scorers, infeasible model specs, conflicting flags.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input files. `line` is 1-based, 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A search or decision step could not produce a result.
class SearchError : public Error {
 public:
  using Error::Error;
};

// An exact identity checked by the oracle was violated beyond tolerance.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace lenbeam
