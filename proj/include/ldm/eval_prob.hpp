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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ldm/term.hpp"
#include "ldm/typing.hpp"

namespace ldm {

inline constexpr long kDefaultFuel = 10000;

/// Why a normal form is not a value.
enum class StuckReason {
  /// A redex waits on a variable bound by an enclosing abstraction.
  BlockedOnVariable,
  /// Mixed calculus: a measurement whose outcome is never consumed.
  MeasurementNotObservable,
};

std::string_view to_string(StuckReason r);

/// Classifies a normal form that is not a value.
StuckReason stuck_reason(const TermPtr& t, Calculus calculus);

using Distribution = std::vector<std::pair<double, TermPtr>>;

struct ProbStep {
  /// beta, unitary, measure, tensor, letcase-pair.
  std::string rule;
  Distribution reducts;
};

/// One step of the classical-control calculus, or nullopt on a normal form.
/// Strategy: in an application the argument is reduced first, then a beta
/// redex fires, then the function is reduced; all other forms are reduced
/// left to right, under abstractions too. Measurement outcomes with
/// probability <= tolerance() are omitted.
/// Throws EvalError(IllFormedRedex) when a closed operand has the wrong shape.
std::optional<ProbStep> step_prob(const TermPtr& t);

struct TraceNode;
using TraceNodePtr = std::shared_ptr<const TraceNode>;

struct TraceNode {
  enum class Status { Internal, Value, Stuck, Exhausted };

  TermPtr term;
  /// Null when types were not requested.
  QTypePtr type;
  Status status = Status::Internal;
  /// Rule applied at an internal node.
  std::string rule;
  std::vector<std::pair<double, TraceNodePtr>> children;
};

struct TraceOptions {
  bool with_types = true;
};

/// Expands every probabilistic branch until each path reaches a normal form
/// or `fuel` steps.
TraceNodePtr build_trace(const TermPtr& t, long fuel = kDefaultFuel, const TraceOptions& opts = {});

struct TraceStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t leaves = 0;
  std::size_t exhausted = 0;
  std::size_t depth = 0;
};

TraceStats trace_stats(const TraceNodePtr& tree);

/// Leaves with their path probabilities, depth-first in branch order.
Distribution trace_leaves(const TraceNodePtr& tree);

/// Leaves grouped up to alpha-equivalence, first occurrence order.
/// Throws EvalError(IncompleteTrace) if a path ran out of fuel.
Distribution final_distribution(const TraceNodePtr& tree);

/// Σ p_i ρ_i. Throws EvalError(NonDensityLeaf / MixedDimensions).
DensityMatrix distribution_density(const Distribution& d);

/// One root-to-leaf walk choosing measurement outcomes with a generator
/// seeded by `seed`. Throws EvalError(FuelExhausted).
TermPtr sample_run(const TermPtr& t, std::uint64_t seed, long fuel = kDefaultFuel);

/// {"term","type","value","status","rule","children":[{"prob","node"}]}
std::string trace_to_json(const TraceNodePtr& tree);
std::string trace_to_dot(const TraceNodePtr& tree);
/// Indented outline, one node per line.
std::string trace_to_text(const TraceNodePtr& tree);

}  // namespace ldm
