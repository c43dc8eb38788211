// Copyright 2026 The FlexDiag Authors
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

namespace flexdiag {

// Base of every error raised by the library. Callers that only want to
// report a failure can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression text. `position` is the byte offset of the
// offending token in the source text.
class ExpressionError : public Error {
 public:
  enum class Kind { syntax, unknown_variable, type };

  ExpressionError(Kind kind, std::size_t position, const std::string& message)
      : Error(message), kind_(kind), position_(position) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

// Task or model documents that violate their schema or invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The session's wall-clock budget ran out in the middle of a search.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded() : Error("time budget exceeded") {}
};

// No diagnosis exists within S: C ∪ R is already inconsistent.
class NoDiagnosisExists : public Error {
 public:
  NoDiagnosisExists() : Error("no diagnosis exists: requirements are inconsistent with the knowledge base") {}
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

class UnsatisfiableModel : public Error {
 public:
  UnsatisfiableModel() : Error("feature model has no valid configuration") {}
};

class NoAlternativeSolution : public Error {
 public:
  NoAlternativeSolution() : Error("model admits no configuration other than the current one") {}
};

}  // namespace flexdiag
