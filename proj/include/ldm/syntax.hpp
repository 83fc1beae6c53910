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

#include <optional>
#include <string>
#include <string_view>

#include "ldm/term.hpp"

namespace ldm {

/// Parses one term. Throws ParseError with a line:column position; a construct
/// of the other calculus is reported with wrong_calculus set.
TermPtr parse(std::string_view source, Calculus calculus);

/// The calculus named by a `#calculus: prob|mixed` comment line, if any.
std::optional<Calculus> detect_calculus(std::string_view source);

/// Concrete syntax; parse(print(t)) is alpha-equivalent to t.
std::string print(const TermPtr& t);

std::string print_gate(const GatePtr& g);

/// A density as a ket shorthand when it is one, otherwise a rho literal.
std::string print_density(const DensityMatrix& d);

/// Exact-looking real: p/q, sqrt(k)/q, or the shortest round-trip decimal.
std::string print_real(double x);

std::string print_complex(Complex z);

}  // namespace ldm
