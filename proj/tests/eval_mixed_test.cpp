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


#include "ldm/eval_mixed.hpp"

#include <gtest/gtest.h>

#include "ldm/syntax.hpp"
#include "programs.hpp"

using namespace ldm;

namespace {

TermPtr M(const std::string& s) { return parse(s, Calculus::Mixed); }

ComplexMatrix diag(double a, double b) {
  ComplexMatrix m(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

ComplexMatrix final_matrix(const std::string& src) {
  TermPtr r = normalize_mixed(M(src));
  EXPECT_EQ(r->kind, TermKind::Rho) << print(r);
  return r->kind == TermKind::Rho ? r->rho->matrix() : ComplexMatrix(2, 2);
}

}  // namespace

TEST(StepMixed, MeasurementUnderLetcase) {
  auto s = step_mixed(M("letcase* x = meas[1] |+> in { x ; x }"));
  ASSERT_EQ(s.kind, MixedStepResult::Kind::Stepped);
  EXPECT_EQ(s.rule, "letcase-meas");
  EXPECT_TRUE(alpha_eq(s.term, M("sum { 1/2: |0> ; 1/2: |1> }")));
  s = step_mixed(s.term);
  EXPECT_EQ(s.rule, "sum-density");
  EXPECT_TRUE(approx_eq(s.term->rho->matrix(), diag(0.5, 0.5), 1e-12));
  EXPECT_EQ(step_mixed(s.term).kind, MixedStepResult::Kind::Value);
}

TEST(StepMixed, SumRules) {
  auto s = step_mixed(M("sum { 1/2: \\x. x ; 1/2: \\y. y }"));
  EXPECT_EQ(s.rule, "sum-collapse");
  EXPECT_TRUE(alpha_eq(s.term, M("\\x. x")));

  s = step_mixed(M("(sum { 1/2: \\x. x ; 1/2: \\x. U[X] x }) |0>"));
  EXPECT_EQ(s.rule, "sum-app");
  EXPECT_TRUE(alpha_eq(s.term, M("sum { 1/2: (\\x. x) |0> ; 1/2: (\\x. U[X] x) |0> }")));

  s = step_mixed(M("sum { 1/2: \\x. x ; 1/2: sum { 1/2: \\x. x ; 1/2: \\x. U[X] x } }"));
  EXPECT_EQ(s.rule, "sum-merge");
  EXPECT_TRUE(alpha_eq(s.term, M("sum { 3/4: \\x. x ; 1/4: \\x. U[X] x }")));
}

TEST(StepMixed, SumCongruenceStepsOneAddend) {
  auto s = step_mixed(M("sum { 1/2: U[X] |0> ; 1/2: U[X] |1> }"));
  EXPECT_EQ(s.rule, "unitary");
  ASSERT_EQ(s.term->kind, TermKind::Sum);
  int rhos = 0;
  for (auto& k : s.term->kids) rhos += k->kind == TermKind::Rho;
  EXPECT_EQ(rhos, 1);
}

TEST(StepMixed, DistinctLambdaSumIsAValue) {
  EXPECT_EQ(step_mixed(M("sum { 1/2: \\x. x ; 1/2: \\x. |0> }")).kind, MixedStepResult::Kind::Value);
}

TEST(StepMixed, BareMeasurementIsStuck) {
  auto s = step_mixed(M("meas[1] |+>"));
  EXPECT_EQ(s.kind, MixedStepResult::Kind::Stuck);
  EXPECT_EQ(s.reason, StuckReason::MeasurementNotObservable);
  s = step_mixed(M("\\x. U[H] x"));
  EXPECT_EQ(s.kind, MixedStepResult::Kind::Stuck);
  EXPECT_EQ(s.reason, StuckReason::BlockedOnVariable);
}

TEST(StepMixed, LetcaseOverASumOfMeasurements) {
  auto s = step_mixed(M("letcase* x = sum { 1/2: meas[1] |0> ; 1/2: meas[1] |1> } in { x ; U[X] x }"));
  EXPECT_EQ(s.rule, "letcase-sum");
  TermPtr r = normalize_mixed(M("letcase* x = sum { 1/2: meas[1] |0> ; 1/2: meas[1] |1> } in { x ; U[X] x }"));
  EXPECT_TRUE(alpha_eq(r, M("|0>"))) << print(r);
}

TEST(StepMixed, IllFormed) {
  EXPECT_THROW(step_mixed(M("|0> |1>")), EvalError);
  EXPECT_THROW(step_mixed(M("letcase* x = |0> in { x ; x }")), EvalError);
}

TEST(NormalizeMixed, CoinExperiment) {
  EXPECT_TRUE(approx_eq(final_matrix(programs::kCoinMixed), diag(5.0 / 8, 3.0 / 8), 1e-12));
}

TEST(NormalizeMixed, CoinTraceGoesUnderTheAbstraction) {
  MixedRun run = run_mixed(M(programs::kCoinMixed));
  std::vector<std::string> rules;
  for (auto& e : run.log) rules.push_back(e.rule);
  // Argument, function, the lambda under the sum, then distribution.
  std::vector<std::string> expect = {"letcase-meas", "sum-density", "letcase-meas", "letcase-meas",
                                     "sum-density",  "sum-app",     "beta",         "beta",
                                     "sum-density"};
  EXPECT_EQ(rules, expect);
}

TEST(NormalizeMixed, O1AndO2Agree) {
  EXPECT_TRUE(approx_eq(final_matrix(programs::kO1RhoMixed), diag(0.75, 0.25), 1e-12));
  EXPECT_TRUE(approx_eq(final_matrix(programs::kO2RhoMixed), diag(0.75, 0.25), 1e-12));
}

TEST(NormalizeMixed, Teleportation) {
  ComplexMatrix rho = M(programs::kCoinRho)->rho->matrix();
  ComplexMatrix out = final_matrix(programs::teleport_applied(programs::kCoinRho, true));
  ComplexMatrix expect = tensor(ComplexMatrix::identity(4).scaled(0.25), rho);
  EXPECT_TRUE(approx_eq(out, expect, 1e-9)) << format_matrix(out);
  EXPECT_TRUE(approx_eq(trace_out_front(out, 2), rho, 1e-9));
}

TEST(NormalizeMixed, Deterministic) {
  for (auto& [src, c] : programs::all()) {
    if (c != Calculus::Mixed) continue;
    TermPtr t = M(src);
    EXPECT_TRUE(alpha_eq(normalize_mixed(t), normalize_mixed(t)));
  }
}

TEST(NormalizeMixed, FuelAndLog) {
  try {
    normalize_mixed(M(programs::kCoinMixed), 2);
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.code, EvalErrorCode::FuelExhausted);
  }
  MixedRun run = run_mixed(M("letcase* x = meas[1] |+> in { x ; x }"));
  std::string log = log_to_jsonl(run.log);
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 2);
  EXPECT_NE(log.find("\"rule\":\"letcase-meas\""), std::string::npos);
}
