// Copyright 2026 The mpmp Authors.
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

#ifndef MPMP_ERRORS_HPP_
#define MPMP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mpmp {

// Root of the library's exception taxonomy. Every error thrown by mpmp
// derives from Error, which derives from std::runtime_error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A function argument violates a precondition (dimension mismatch,
// non-symmetric matrix, non-unit vector, non-finite entries, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// A matrix required to be positive definite is numerically singular.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// A root bracket is invalid: the function has the same sign at both ends.
class BracketError : public Error {
 public:
  using Error::Error;
};

// A configuration object violates its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A game-state object is unusable for the requested operation
// (e.g. a zero receiver vector where an SINR is requested).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// An operation that divides by a transmit power met a zero power.
class DegeneratePowerError : public Error {
 public:
  using Error::Error;
};

// A utility value is mathematically undefined at the given state.
class UndefinedUtilityError : public Error {
 public:
  using Error::Error;
};

// A config or data file is malformed; message carries file/line/field.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure (unreadable input, unwritable output).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpmp

#endif  // MPMP_ERRORS_HPP_
