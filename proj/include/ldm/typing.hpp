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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ldm/term.hpp"

namespace ldm {

struct QType;
using QTypePtr = std::shared_ptr<const QType>;

/// n | (m,n) | A -o B
struct QType {
  enum class Kind { Qubits, MeasResult, Arrow };
  Kind kind;
  unsigned n = 0;
  unsigned m = 0;
  QTypePtr dom, cod;

  static QTypePtr qubits(unsigned n);
  /// Throws Error unless m <= n.
  static QTypePtr meas_result(unsigned m, unsigned n);
  static QTypePtr arrow(QTypePtr dom, QTypePtr cod);

  bool is_base() const { return kind != Kind::Arrow; }
};

bool operator==(const QType& a, const QType& b);
inline bool same_type(const QTypePtr& a, const QTypePtr& b) { return *a == *b; }

/// `1 -o 3`, `(1,2)`; arrows associate to the right.
std::string to_string(const QType& t);

using TypingContext = std::vector<std::pair<std::string, QTypePtr>>;

struct TypingOptions {
  /// Literal letcase rule: branches may mention only the bound variable.
  bool closed_branches = false;
};

/// Infers the type of t. The surface syntax carries no annotations, so a
/// term may have a family of types (e.g. \x. x); the least instance is
/// returned, with unconstrained qubit counts set to the smallest admissible
/// value (at least 1) and unconstrained types set to 1.
/// Throws TypeError.
QTypePtr infer(const TypingContext& ctx, const TermPtr& t, Calculus calculus, const TypingOptions& opts = {});

/// True iff t can be given type `a` under ctx.
bool check(const TypingContext& ctx, const TermPtr& t, const QTypePtr& a, Calculus calculus,
           const TypingOptions& opts = {});

/// The most general type with free parameters printed as `'a`, `n1`, ...
/// and its side conditions, e.g. "n1 -o n1 where 2 <= n1".
std::string principal_type(const TypingContext& ctx, const TermPtr& t, Calculus calculus,
                           const TypingOptions& opts = {});

/// Subject-reduction witness for one step: t' admits t's inferred type.
bool check_metatheory_step(const TypingContext& ctx, const TermPtr& t, const TermPtr& t2, Calculus calculus,
                           const TypingOptions& opts = {});

}  // namespace ldm
