// Copyright 2026 The quanta Authors.
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

#ifndef QUANTA_ERRORS_HPP
#define QUANTA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quanta {

  /// Argument outside the domain of an operation (alpha <= 0, omega >= beta, ...).
  class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
  };

  /// Input text or file does not follow the density / curve grammar.
  class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
  };

  /// Numerical failure: degenerate transform, no saddle, no states, solver cap.
  class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
  };

  class DegenerateDensityError : public NumericError {
  public:
    using NumericError::NumericError;
  };

  class NoSaddleError : public NumericError {
  public:
    using NumericError::NumericError;
  };

  class NoStatesError : public NumericError {
  public:
    using NumericError::NumericError;
  };

}

#endif
