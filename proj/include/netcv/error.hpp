// Copyright 2026 The netcv Authors.
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

namespace netcv {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter is outside its domain (w, k, theta, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Input data has the wrong shape or violates a structural invariant.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// LAPACK reported a failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A fit had nothing to estimate from.
class DegenerateFit : public Error {
 public:
  using Error::Error;
};

// A split has an empty evaluation set.
class DegenerateSplit : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

class SelectionError : public Error {
 public:
  using Error::Error;
};

// Graph file could not be parsed. Carries the 1-based line number.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, int line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace netcv
