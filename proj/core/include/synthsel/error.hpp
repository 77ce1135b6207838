// Copyright 2026 The synthsel Authors.
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

namespace synthsel {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed SyGuS / SMT-LIB text. Carries a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that uses a feature outside the supported subset.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Ill-sorted or ill-arity term construction.
class SortError : public Error {
 public:
  using Error::Error;
};

/// Failure while evaluating a term on concrete values.
class EvalError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public EvalError {
 public:
  DivisionByZero() : EvalError("division by zero") {}
};

}  // namespace synthsel
