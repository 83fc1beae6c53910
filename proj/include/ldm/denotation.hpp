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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ldm/matrix.hpp"
#include "ldm/term.hpp"
#include "ldm/typing.hpp"

namespace ldm {

/// A measurement label, or nullopt for the empty tag.
using Tag = std::optional<unsigned>;

std::string tag_string(const Tag& b);

struct Closure;
using ClosurePtr = std::shared_ptr<const Closure>;

/// A density matrix or a function closure.
using DenElement = std::variant<DensityMatrix, ClosurePtr>;

using Valuation = std::map<std::string, std::pair<Tag, DenElement>>;

struct Closure {
  std::string binder;
  TermPtr body;
  Valuation env;
};

struct Triplet {
  double p;
  Tag b;
  DenElement e;
};

using TripletSet = std::vector<Triplet>;

/// The set interpretation of t under theta, with equal (tag, matrix)
/// triplets merged and the result sorted by tag then printed element.
/// Function elements are never merged.
/// Throws DenotationError: ValuationMismatch for a free variable missing
/// from theta, UnapplicableElement when a matrix is applied, ShapeMismatch
/// for other ill-shaped elements.
TripletSet interp(const TermPtr& t, const Valuation& theta = {});

/// Same without merging; triplets appear in evaluation order.
TripletSet interp_raw(const TermPtr& t, const Valuation& theta = {});

/// Applies a function element to one argument.
TripletSet apply(const DenElement& f, const Tag& b, const DenElement& arg);

/// Equal tag/matrix triplets merged, canonical order.
TripletSet merge(const TripletSet& s);

/// Equality of merged sets of matrix triplets, weights within 10 tolerance().
bool same_set(const TripletSet& a, const TripletSet& b);

double weight(const TripletSet& s);

/// False only for the empty tag at a measurement type.
bool check_P(const Tag& b, const QType& a);

/// The density-matrix interpretation: a matrix at base types, and at arrow
/// types a function whose application is evaluated on demand.
class SemValue {
 public:
  explicit SemValue(DensityMatrix m) : mat_(std::move(m)) {}
  explicit SemValue(TripletSet funs) : funs_(std::move(funs)) {}

  bool is_matrix() const { return mat_.has_value(); }
  /// Throws DenotationError(ShapeMismatch) at arrow type.
  const DensityMatrix& matrix() const;
  /// Σ p_i ⦇body_i⦈ under the argument. Throws at base type.
  SemValue operator()(const Tag& b, const DenElement& arg) const;

 private:
  std::optional<DensityMatrix> mat_;
  TripletSet funs_;
};

/// Throws DenotationError as interp, and ShapeMismatch when the elements mix
/// matrices with functions or sizes.
SemValue fsem(const TermPtr& t, const Valuation& theta = {});

/// Σ p_i e_i over a set of matrix triplets.
DensityMatrix set_density(const TripletSet& s);

/// Inputs used to test membership at a function type.
std::vector<std::pair<Tag, DenElement>> standard_probes(const QType& dom);

/// e ∈ ⟦a⟧. Matrices are checked exactly; functions only on the probes,
/// each of which must satisfy P at the domain (else ShapeMismatch).
/// Codomains of arrow type are probed with standard_probes.
bool check_tsem_membership(const DenElement& e, const QType& a,
                           const std::vector<std::pair<Tag, DenElement>>& probes);
bool check_tsem_membership(const DenElement& e, const QType& a);

/// theta ⊨ ctx. Throws DenotationError(ValuationMismatch) naming the first
/// offending variable.
void check_valuation(const Valuation& theta, const TypingContext& ctx);

/// {(3/4, eps, |0>), ...}
std::string to_string(const TripletSet& s);
std::string element_string(const DenElement& e);

/// [{"p", "b", "e": {"kind": "mat", "n", "entries": [[re, im], ...]} | {"kind": "fun", "term"}}]
std::string to_json(const TripletSet& s);

}  // namespace ldm
