// Copyright 2026 The ionsel Authors
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

namespace ionsel {

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorClass {
    kConfig,     // malformed input or out-of-range argument
    kPhysics,    // physically meaningless request (e.g. herald with zero probability)
    kNumerical,  // truncation or integration failure
};

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
    virtual ErrorClass error_class() const noexcept { return ErrorClass::kConfig; }
};

class InvalidArgument : public Error {
   public:
    using Error::Error;
};

class DimensionMismatch : public Error {
   public:
    using Error::Error;
};

/// A measurement outcome whose probability is below the herald threshold.
class ZeroProbability : public Error {
   public:
    using Error::Error;
    ErrorClass error_class() const noexcept override { return ErrorClass::kPhysics; }
};

/// No grid point of a design search satisfies the constraints.
class Infeasible : public Error {
   public:
    using Error::Error;
    ErrorClass error_class() const noexcept override { return ErrorClass::kPhysics; }
};

/// The truncated Fock space cannot represent the requested operation accurately.
class TruncationError : public Error {
   public:
    using Error::Error;
    ErrorClass error_class() const noexcept override { return ErrorClass::kNumerical; }
};

/// The adaptive integrator could not meet its tolerance.
class StepFailure : public Error {
   public:
    using Error::Error;
    ErrorClass error_class() const noexcept override { return ErrorClass::kNumerical; }
};

class NonHermitian : public Error {
   public:
    using Error::Error;
    ErrorClass error_class() const noexcept override { return ErrorClass::kNumerical; }
};

}  // namespace ionsel
