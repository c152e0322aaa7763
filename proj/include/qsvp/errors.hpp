// Copyright 2026 The qsvp Authors
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
#include <stdexcept>
#include <string>

namespace qsvp {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A size exceeds a configured cap (qubit count, dense matrix size, buffer).
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Input data violates a domain invariant (non-unitary gate, unnormalized
/// qubit, control equal to target).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// An index argument lies outside its valid range.
class RangeError : public Error {
  public:
    using Error::Error;
};

/// A function was called outside its precondition, e.g. asking for the
/// communication partner of a qubit that never communicates.
class ContractError : public Error {
  public:
    using Error::Error;
};

/// Text input could not be parsed. Carries the 1-based line number when
/// the input is a file, 0 otherwise.
class ParseError : public Error {
  public:
    explicit ParseError(const std::string &what) : Error(what), line_(0) {}
    ParseError(std::size_t line, const std::string &what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

} // namespace qsvp
