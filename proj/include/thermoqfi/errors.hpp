// Copyright 2026 The thermoqfi Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Exception types thrown by the library.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace thermoqfi {

/// Argument outside the mathematical domain (T <= 0, t < 0, bad dimension).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Input that violates a structural invariant (non-Hermitian matrix, bad CSV).
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to produce a trustworthy answer.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string &what) {
    if (!ok) {
        throw DomainError(what);
    }
}

inline void require_input(bool ok, const std::string &what) {
    if (!ok) {
        throw InvalidInput(what);
    }
}

} // namespace detail
} // namespace thermoqfi
