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
#include <optional>
#include <string>
#include <string_view>

#include "ldm/eval_prob.hpp"
#include "ldm/term.hpp"

namespace ldm {

/// Outcome of a command; the numeric values are the CLI exit codes.
enum class Status {
  Ok = 0,
  /// Type error, or two programs with distinct denotations.
  Mismatch = 1,
  ParseError = 2,
  FuelExhausted = 3,
  Stuck = 4,
  RuntimeError = 5,
};

enum class OutputFormat { Text, Json, Dot };

struct RunConfig {
  Calculus calculus = Calculus::Prob;
  double tolerance = 1e-9;
  long fuel = kDefaultFuel;
  std::optional<std::uint64_t> seed;
  OutputFormat output = OutputFormat::Text;
  bool strict_letcase = false;
};

struct Report {
  Status status = Status::Ok;
  /// Result for standard output.
  std::string out;
  /// Diagnostics for standard error.
  std::string err;
};

// Each command reads the calculus from a `#calculus:` line when present,
// falling back to cfg.calculus, and typechecks before doing anything else.
// `name` only labels diagnostics.

/// The inferred type.
Report cmd_typecheck(const RunConfig& cfg, std::string_view name, std::string_view source);
/// prob: the final distribution and its density, or one sampled run when a
/// seed is set. mixed: the normal form.
Report cmd_run(const RunConfig& cfg, std::string_view name, std::string_view source);
/// prob: the whole trace tree. mixed: the step log.
Report cmd_trace(const RunConfig& cfg, std::string_view name, std::string_view source);
/// The triplet set, raw and merged, and at base type the density matrix.
Report cmd_denote(const RunConfig& cfg, std::string_view name, std::string_view source);
/// EQUIVALENT or DISTINCT with the largest entry deviation.
Report cmd_equiv(const RunConfig& cfg, std::string_view name_a, std::string_view source_a, std::string_view name_b,
                 std::string_view source_b);

}  // namespace ldm
