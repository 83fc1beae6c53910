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

#include "ldm/term.hpp"

#include <gtest/gtest.h>

#include "ldm/syntax.hpp"
#include "programs.hpp"

using namespace ldm;

namespace {

TermPtr P(const std::string& s) { return parse(s, Calculus::Prob); }
TermPtr M(const std::string& s) { return parse(s, Calculus::Mixed); }

}  // namespace

TEST(FreeVars, Basics) {
  EXPECT_EQ(free_vars(P("\\x. x y")), std::set<std::string>{"y"});
  EXPECT_EQ(free_vars(P("letcase y = x in { y ; y }")), std::set<std::string>{"x"});
  EXPECT_TRUE(free_vars(P(programs::kTeleport)).empty());
  EXPECT_EQ(free_vars(P("letcase y = y in { y ; z }")), (std::set<std::string>{"y", "z"}));
}

TEST(Subst, Basics) {
  EXPECT_TRUE(alpha_eq(subst(P("x"), "x", P("|0>")), P("|0>")));
  TermPtr s = subst(P("\\y. x"), "x", P("y"));
  EXPECT_EQ(print(s), "\\y'. y");
  TermPtr shadow = P("\\x. x");
  EXPECT_EQ(subst(shadow, "x", P("|1>")), shadow);
  TermPtr lc = subst(P("letcase y = x in { y ; x }"), "x", P("y"));
  EXPECT_EQ(print(lc), "letcase y' = y in { y' ; y }");
}

TEST(Subst, CoinBranch) {
  // The second coin branch applied to |0>: the argument is discarded.
  TermPtr t1 = P("\\x. letcase w = meas[1] |+> in { w ; w }");
  TermPtr body = subst(t1->body(), t1->name, P("|0>"));
  EXPECT_TRUE(alpha_eq(body, P("letcase w = meas[1] |+> in { w ; w }")));
  TermPtr y = subst(P("U[I(2)*Z] y"), "y", P("|010>"));
  EXPECT_EQ(print(y), "U[I(2)*Z] |010>");
}

TEST(Subst, UnusedVariableIsIdentity) {
  for (const auto& [src, calc] : programs::all()) {
    TermPtr t = parse(src, calc);
    EXPECT_EQ(subst(t, "zz", P("|0>")), t);
  }
}

TEST(AlphaEq, Basics) {
  EXPECT_TRUE(alpha_eq(P("\\x. x"), P("\\y. y")));
  EXPECT_FALSE(alpha_eq(P("\\x. x"), P("\\x. \\y. x y")));
  EXPECT_FALSE(alpha_eq(P("\\x. y"), P("\\y. y")));
  EXPECT_TRUE(alpha_eq(P("letcase a = z in { a ; a }"), P("letcase b = z in { b ; b }")));
  EXPECT_FALSE(alpha_eq(P("U[X] |0>"), P("U[Z] |0>")));
  EXPECT_TRUE(alpha_eq(P("U[I*I] |00>"), P("U[I(2)] |00>")));
  EXPECT_TRUE(alpha_eq(M("sum { 1/2: \\x. x ; 1/2: |0> }"), M("sum { 1/2: |0> ; 1/2: \\y. y }")));
  EXPECT_FALSE(alpha_eq(M("sum { 1/4: |1> ; 3/4: |0> }"), M("sum { 3/4: |1> ; 1/4: |0> }")));
  EXPECT_TRUE(alpha_eq(P("rho[1]{ 0.5000000000001, 0.5 ; 0.5, 0.4999999999999 }"), P("|+>")));
}

TEST(CanonicalSum, MergesAndFlattens) {
  TermPtr a = canonical_sum(M("sum { 1/2: \\x. x ; 1/2: \\y. y }"));
  ASSERT_EQ(a->kids.size(), 1u);
  EXPECT_DOUBLE_EQ(a->weights[0], 1.0);
  TermPtr n = canonical_sum(M("sum { 1/2: sum { 1/2: |0> ; 1/2: |1> } ; 1/2: |1> }"));
  ASSERT_EQ(n->kids.size(), 2u);
  EXPECT_TRUE(alpha_eq(n, M("sum { 1/4: |0> ; 3/4: |1> }")));
  EXPECT_EQ(print(n), print(canonical_sum(n)));
  TermPtr z = P("|0>");
  EXPECT_EQ(canonical_sum(z), z);
}

TEST(CanonicalSum, OrderIsIndependentOfInputOrder) {
  TermPtr a = canonical_sum(M("sum { 1/3: |0> ; 1/3: |1> ; 1/3: |+> }"));
  TermPtr b = canonical_sum(M("sum { 1/3: |+> ; 1/3: |0> ; 1/3: |1> }"));
  EXPECT_EQ(print(a), print(b));
}

TEST(Values, Grammar) {
  EXPECT_TRUE(is_value_prob(P("|0>")));
  EXPECT_TRUE(is_value_prob(P("pair(1, 1, |1>)")));
  EXPECT_TRUE(is_value_prob(P("\\x. x >< x")));
  EXPECT_TRUE(is_value_prob(P("\\x. |0>")));
  EXPECT_FALSE(is_value_prob(P("|0> >< |1>")));
  EXPECT_FALSE(is_value_prob(P("\\x. U[H] x")));
  EXPECT_FALSE(is_value_prob(P("(\\x. x) |0>")));
  EXPECT_TRUE(is_value_mixed(M("sum { 1/2: \\x. x ; 1/2: \\x. |0> }")));
  EXPECT_FALSE(is_value_mixed(M("sum { 1/2: \\x. x ; 1/2: \\y. y }")));
  EXPECT_FALSE(is_value_mixed(M("sum { 1/2: |0> ; 1/2: |1> }")));
}

TEST(WellFormed, ForeignConstructs) {
  TermPtr t = M("sum { 1/2: |0> ; 1/2: |1> }");
  EXPECT_EQ(foreign_construct(t, Calculus::Mixed), nullptr);
  EXPECT_EQ(foreign_construct(t, Calculus::Prob), t.get());
  EXPECT_EQ(foreign_construct(P(programs::kCoin), Calculus::Prob), nullptr);
  EXPECT_NE(foreign_construct(P(programs::kCoin), Calculus::Mixed), nullptr);
}
