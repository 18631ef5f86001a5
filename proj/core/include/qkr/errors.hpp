// Copyright 2026 The qkr Authors
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

#ifndef QKR_ERRORS_HPP
#define QKR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qkr {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An index, qubit number or momentum lies outside its allowed range.
class RangeError : public Error {
  public:
    using Error::Error;
};

/// An operation was applied to a state in the wrong representation or with
/// mismatched dimensions.
class StateError : public Error {
  public:
    using Error::Error;
};

/// Invalid numerical parameters, e.g. a fit with too few samples.
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// The input lies outside the mathematical domain of a quantity.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// A runtime invariant (e.g. norm conservation) was violated mid-run.
class InvariantViolation : public Error {
  public:
    using Error::Error;
};

/// Missing, unreadable, unwritable or corrupt file.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace qkr

#endif  // QKR_ERRORS_HPP
