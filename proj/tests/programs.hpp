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

// Source text of the reference programs shared by the test suites.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ldm/term.hpp"

namespace programs {

inline const std::string kCoinRho = "rho[1]{ 3/4, sqrt(3)/4 ; sqrt(3)/4, 1/4 }";

inline const std::string kTeleportBody =
    "letcase y = meas[2] (U[H*I(2)] (U[CNOT*I(1)] (x >< bell00))) in "
    "{ y ; U[I(2)*Z] y ; U[I(2)*X] y ; U[I(2)*Z] (U[I(2)*X] y) }";

inline const std::string kTeleport = "\\x. " + kTeleportBody;

inline const std::string kTeleportMixed =
    "\\x. letcase* y = meas[2] (U[H*I(2)] (U[CNOT*I(1)] (x >< bell00))) in "
    "{ y ; U[I(2)*Z] y ; U[I(2)*X] y ; U[I(2)*Z] (U[I(2)*X] y) }";

inline std::string teleport_applied(const std::string& rho_src, bool mixed = false) {
  return "(" + (mixed ? kTeleportMixed : kTeleport) + ") " + rho_src;
}

// The coin experiment: a fair coin picks the identity or a function that
// discards its argument and returns a fresh fair bit.
inline const std::string kCoinR1 =
    "letcase y = meas[1] |+> in { \\x. x ; \\x. letcase w = meas[1] |+> in { w ; w } }";
inline const std::string kCoinR2 = "letcase z = meas[1] " + kCoinRho + " in { z ; z }";
inline const std::string kCoin = "(" + kCoinR1 + ") (" + kCoinR2 + ")";

inline const std::string kCoinMixed =
    "(letcase* y = meas[1] |+> in { \\x. x ; \\x. letcase* w = meas[1] |+> in { w ; w } }) "
    "(letcase* z = meas[1] " + kCoinRho + " in { z ; z })";

inline const std::string kO1 = "\\y. letcase x = meas[1] |+> in { y ; U[Z] y }";
inline const std::string kO2 = "\\y. letcase x = meas[1] y in { x ; x }";
inline const std::string kO1Rho = "(" + kO1 + ") " + kCoinRho;
inline const std::string kO2Rho = "(" + kO2 + ") " + kCoinRho;

inline const std::string kO1Mixed = "\\y. letcase* x = meas[1] |+> in { y ; U[Z] y }";
inline const std::string kO2Mixed = "\\y. letcase* x = meas[1] y in { x ; x }";
inline const std::string kO1RhoMixed = "(" + kO1Mixed + ") " + kCoinRho;
inline const std::string kO2RhoMixed = "(" + kO2Mixed + ") " + kCoinRho;

inline std::vector<std::pair<std::string, ldm::Calculus>> all() {
  using ldm::Calculus;
  return {{kTeleport, Calculus::Prob},      {teleport_applied(kCoinRho), Calculus::Prob},
          {kTeleportMixed, Calculus::Mixed}, {kCoin, Calculus::Prob},
          {kCoinMixed, Calculus::Mixed},     {kO1Rho, Calculus::Prob},
          {kO2Rho, Calculus::Prob},          {kO1RhoMixed, Calculus::Mixed},
          {kO2RhoMixed, Calculus::Mixed}};
}

}  // namespace programs
