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

#include <string>
#include <vector>

#include "ldm/eval_prob.hpp"
#include "ldm/term.hpp"

namespace ldm {

struct MixedStepResult {
  enum class Kind { Stepped, Value, Stuck };
  Kind kind;
  /// The reduct when Stepped, otherwise the input.
  TermPtr term;
  /// beta, unitary, tensor, letcase-meas, letcase-sum, sum-collapse,
  /// sum-merge, sum-density, sum-app.
  std::string rule;
  StuckReason reason = StuckReason::BlockedOnVariable;
};

/// One deterministic step of the probabilistic-control calculus.
/// Same strategy as step_prob for applications (argument, beta, function,
/// then distribution of a sum in function position). At a sum node:
/// collapse of alpha-equal addends, merge of nested or repeated addends,
/// mixing of densities, then the first reducible addend in canonical order.
/// Throws EvalError(IllFormedRedex) when a closed operand has the wrong shape.
MixedStepResult step_mixed(const TermPtr& t);

struct MixedLogEntry {
  std::string rule;
  TermPtr term;
};

struct MixedRun {
  TermPtr result;
  /// Value or Stuck; Stepped means the fuel ran out.
  MixedStepResult::Kind status;
  StuckReason reason = StuckReason::BlockedOnVariable;
  std::vector<MixedLogEntry> log;
};

/// Iterates step_mixed at most `fuel` times, recording every reduct.
MixedRun run_mixed(const TermPtr& t, long fuel = kDefaultFuel);

/// Final term of run_mixed. Throws EvalError(FuelExhausted).
TermPtr normalize_mixed(const TermPtr& t, long fuel = kDefaultFuel);

/// One JSON object per line: {"step","rule","term"}.
std::string log_to_jsonl(const std::vector<MixedLogEntry>& log);

}  // namespace ldm
