// Copyright 2026 The qslab Authors
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

namespace qsl {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a precondition (dimension mismatch, out-of-range time, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Orthogonal component requested for a state with vanishing variance.
class DegenerateDecompositionError : public Error {
 public:
  using Error::Error;
};

// Two instantaneous levels came closer than the gap threshold.
class GapCollisionError : public Error {
 public:
  using Error::Error;
};

// Iterative eigensolver hit its sweep cap.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

// Integrator lost unitarity beyond tolerance; the message suggests a finer grid.
class NormDriftError : public Error {
 public:
  using Error::Error;
};

// An evolved basis stopped being orthonormal.
class PropagationAccuracyError : public Error {
 public:
  using Error::Error;
};

// A bound's precondition (e.g. eigenstate start) does not hold.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Overlap too small for the double-precision path.
class UnderflowError : public Error {
 public:
  using Error::Error;
};

// Run configuration rejected; the message names the offending field.
class ConfigError : public UsageError {
 public:
  using UsageError::UsageError;
};

// Numeric input outside a function's domain (e.g. log of a nonpositive value).
class DomainError : public UsageError {
 public:
  using UsageError::UsageError;
};

// File could not be written or read; the message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qsl
