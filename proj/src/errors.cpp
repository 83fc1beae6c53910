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

#include "ldm/errors.hpp"

namespace ldm {

ArityError::ArityError(unsigned op_arity, unsigned qubits)
    : Error("arity error: " + std::to_string(op_arity) + "-qubit operator applied to " + std::to_string(qubits) +
            " qubit(s)"),
      op_arity(op_arity),
      qubits(qubits) {}

std::string_view to_string(DensityCheck check) {
  switch (check) {
    case DensityCheck::NotSquarePowerOfTwo: return "NotSquarePowerOfTwo";
    case DensityCheck::NotHermitian: return "NotHermitian";
    case DensityCheck::NotPositive: return "NotPositive";
    case DensityCheck::TraceNotOne: return "TraceNotOne";
    case DensityCheck::NotUnitary: return "NotUnitary";
  }
  return "?";
}

DensityError::DensityError(DensityCheck check, double deviation, const std::string& detail)
    : Error(std::string(to_string(check)) + ": " + detail), check(check), deviation(deviation) {}

std::string SourceSpan::str() const {
  if (!valid()) return "?";
  return std::to_string(line) + ":" + std::to_string(col);
}

ParseError::ParseError(SourceSpan span, const std::string& message, bool wrong_calculus)
    : Error(span.str() + ": " + message), span(span), detail(message), wrong_calculus(wrong_calculus) {}

std::string_view to_string(TypeErrorCode code) {
  switch (code) {
    case TypeErrorCode::UnboundVariable: return "UnboundVariable";
    case TypeErrorCode::AffineViolation: return "AffineViolation";
    case TypeErrorCode::BranchCountMismatch: return "BranchCountMismatch";
    case TypeErrorCode::BranchNotClosed: return "BranchNotClosed";
    case TypeErrorCode::TypeMismatch: return "TypeMismatch";
    case TypeErrorCode::ArityMismatch: return "ArityMismatch";
  }
  return "?";
}

TypeError::TypeError(TypeErrorCode code, SourceSpan span, const std::string& message, std::string expected,
                     std::string actual, SourceSpan other)
    : Error(std::string(to_string(code)) + " at " + span.str() + ": " + message),
      code(code),
      span(span),
      other(other),
      detail(message),
      expected(std::move(expected)),
      actual(std::move(actual)) {}

std::string_view to_string(EvalErrorCode code) {
  switch (code) {
    case EvalErrorCode::IllFormedRedex: return "IllFormedRedex";
    case EvalErrorCode::FuelExhausted: return "FuelExhausted";
    case EvalErrorCode::IncompleteTrace: return "IncompleteTrace";
    case EvalErrorCode::NonDensityLeaf: return "NonDensityLeaf";
    case EvalErrorCode::MixedDimensions: return "MixedDimensions";
  }
  return "?";
}

EvalError::EvalError(EvalErrorCode code, const std::string& message)
    : Error(std::string(to_string(code)) + ": " + message), code(code), detail(message) {}

std::string_view to_string(DenotationErrorCode code) {
  switch (code) {
    case DenotationErrorCode::ValuationMismatch: return "ValuationMismatch";
    case DenotationErrorCode::UnapplicableElement: return "UnapplicableElement";
    case DenotationErrorCode::ShapeMismatch: return "ShapeMismatch";
  }
  return "?";
}

DenotationError::DenotationError(DenotationErrorCode code, const std::string& message)
    : Error(std::string(to_string(code)) + ": " + message), code(code), detail(message) {}

}  // namespace ldm
