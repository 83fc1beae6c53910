// Copyright 2026 The ldm Authors
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
#include <string_view>

namespace ldm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An m-qubit operator applied to fewer than m qubits.
class ArityError : public Error {
 public:
  ArityError(unsigned op_arity, unsigned qubits);
  unsigned op_arity;
  unsigned qubits;
};

enum class DensityCheck { NotSquarePowerOfTwo, NotHermitian, NotPositive, TraceNotOne, NotUnitary };

std::string_view to_string(DensityCheck check);

class DensityError : public Error {
 public:
  DensityError(DensityCheck check, double deviation, const std::string& detail);
  DensityCheck check;
  /// Measured deviation for the failed check (e.g. the offending eigenvalue).
  double deviation;
};

struct SourceSpan {
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;

  bool valid() const { return line > 0; }
  std::string str() const;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& message, bool wrong_calculus = false);
  SourceSpan span;
  std::string detail;
  /// The construct parsed but belongs to the other calculus.
  bool wrong_calculus;
};

enum class TypeErrorCode {
  UnboundVariable,
  AffineViolation,
  BranchCountMismatch,
  BranchNotClosed,
  TypeMismatch,
  ArityMismatch,
};

std::string_view to_string(TypeErrorCode code);

class TypeError : public Error {
 public:
  TypeError(TypeErrorCode code, SourceSpan span, const std::string& message, std::string expected = {},
            std::string actual = {}, SourceSpan other = {});
  TypeErrorCode code;
  SourceSpan span;
  /// Second use site for AffineViolation.
  SourceSpan other;
  std::string detail;
  std::string expected;
  std::string actual;
};

enum class EvalErrorCode { IllFormedRedex, FuelExhausted, IncompleteTrace, NonDensityLeaf, MixedDimensions };

std::string_view to_string(EvalErrorCode code);

class EvalError : public Error {
 public:
  EvalError(EvalErrorCode code, const std::string& message);
  EvalErrorCode code;
  /// The message without the code prefix.
  std::string detail;
};

enum class DenotationErrorCode { ValuationMismatch, UnapplicableElement, ShapeMismatch };

std::string_view to_string(DenotationErrorCode code);

class DenotationError : public Error {
 public:
  DenotationError(DenotationErrorCode code, const std::string& message);
  DenotationErrorCode code;
  /// The message without the code prefix.
  std::string detail;
};

}  // namespace ldm
