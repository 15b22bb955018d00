// Copyright 2026 The bosonlab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace bosonlab {

/// Thrown when a caller breaks an operation's precondition (shape mismatch,
/// invalid pattern, unsatisfied construction condition).
struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an input is valid but exceeds a documented size guard.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

/// Thrown when a formula is evaluated outside the parameter range where it is defined.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace bosonlab
