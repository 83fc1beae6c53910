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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ldm/errors.hpp"
#include "ldm/matrix.hpp"

namespace ldm {

/// prob: classical control (λρ). mixed: probabilistic control (λρ°).
enum class Calculus { Prob, Mixed };

std::string_view to_string(Calculus c);

struct GateExpr;
using GatePtr = std::shared_ptr<const GateExpr>;

/// A gate expression: a built-in name, I(n), a literal matrix, or a tensor.
struct GateExpr {
  enum class Kind { Named, Identity, Literal, Tensor };

  Kind kind;
  std::string name;  // Named
  unsigned width = 0;  // Identity
  GatePtr left, right;  // Tensor
  UnitaryOp op;  // evaluated operator, always present

  unsigned arity() const { return op.arity(); }

  static GatePtr named(std::string_view name);
  static GatePtr identity(unsigned n);
  static GatePtr literal(const ComplexMatrix& mat);
  static GatePtr tensor(GatePtr a, GatePtr b);

 private:
  GateExpr(Kind k, UnitaryOp u) : kind(k), op(std::move(u)) {}
};

enum class TermKind { Var, Lam, App, Rho, Unitary, Meas, Tensor, Pair, LetCase, Sum };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable AST node shared by both calculi. Which fields are meaningful
/// depends on `kind`; use the constructor functions below.
struct Term {
  TermKind kind;
  /// Var name, Lam binder, LetCase binder.
  std::string name;
  /// Lam: {body}. App: {fun, arg}. Unitary, Meas: {arg}. Tensor: {left, right}.
  /// LetCase: {scrutinee, branch0, ..., branch(2^m - 1)}. Sum: addends.
  std::vector<TermPtr> kids;
  /// Sum weights, parallel to kids.
  std::vector<double> weights;
  /// Rho and Pair payload.
  std::optional<DensityMatrix> rho;
  GatePtr gate;
  /// Meas arity, Pair arity.
  unsigned m = 0;
  /// Pair outcome.
  unsigned b = 0;
  /// LetCase: true for letcase* (the mixed-calculus form).
  bool star = false;
  /// Position in the source text; ignored by every comparison.
  SourceSpan span;

  const TermPtr& body() const { return kids[0]; }
  const TermPtr& fun() const { return kids[0]; }
  const TermPtr& arg() const { return kids[kind == TermKind::App ? 1 : 0]; }
  const TermPtr& left() const { return kids[0]; }
  const TermPtr& right() const { return kids[1]; }
  const TermPtr& scrutinee() const { return kids[0]; }
  std::size_t branch_count() const { return kids.size() - 1; }
  const TermPtr& branch(std::size_t i) const { return kids[i + 1]; }
};

TermPtr var(std::string name, SourceSpan span = {});
TermPtr lam(std::string binder, TermPtr body, SourceSpan span = {});
TermPtr app(TermPtr fun, TermPtr arg, SourceSpan span = {});
TermPtr rho(DensityMatrix d, SourceSpan span = {});
TermPtr unitary(GatePtr gate, TermPtr arg, SourceSpan span = {});
TermPtr meas(unsigned m, TermPtr arg, SourceSpan span = {});
TermPtr tensor(TermPtr l, TermPtr r, SourceSpan span = {});
/// Throws Error unless b < 2^m.
TermPtr pair(unsigned b, unsigned m, DensityMatrix d, SourceSpan span = {});
/// Throws Error unless the branch count is a power of two.
TermPtr letcase(std::string binder, TermPtr scrutinee, std::vector<TermPtr> branches, bool star,
                SourceSpan span = {});
/// Throws Error unless non-empty with every weight in (ε, 1].
TermPtr sum(std::vector<double> weights, std::vector<TermPtr> addends, SourceSpan span = {});

/// Same node with a different child list (all other fields kept).
TermPtr with_kids(const Term& t, std::vector<TermPtr> kids);

std::set<std::string> free_vars(const TermPtr& t);
bool is_closed(const TermPtr& t);

/// t[r/x], capture-avoiding. Binders that would capture a free variable of r
/// are renamed by appending primes.
TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& r);

/// A name derived from `base` by appending primes, not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

/// Equality up to bound-variable renaming. Density leaves compare at
/// tolerance(); sums compare as multisets of (weight, addend).
bool alpha_eq(const TermPtr& a, const TermPtr& b);

/// Flattens nested sums, merges alpha-equal addends and sorts by canonical_key.
/// Non-sum input is returned unchanged.
TermPtr canonical_sum(const TermPtr& t);

/// Deterministic printed form with bound names replaced by binder depth and
/// numbers rounded; alpha-equal terms usually share a key.
std::string canonical_key(const TermPtr& t);

/// Value grammar of the classical-control calculus:
///   w ::= x | \x.v | w >< w     v ::= w | rho | pair
bool is_value_prob(const TermPtr& t);

/// Value grammar of the mixed calculus:
///   w ::= x | \x.v | w >< w | sum of two or more pairwise distinct, non-sum w
///   v ::= w | rho
bool is_value_mixed(const TermPtr& t);

bool is_value(const TermPtr& t, Calculus c);

/// The first construct that does not belong to calculus `c`, or nullptr.
const Term* foreign_construct(const TermPtr& t, Calculus c);

std::size_t term_size(const TermPtr& t);

}  // namespace ldm
