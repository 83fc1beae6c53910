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

#include "ldm/eval_prob.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "ldm/syntax.hpp"
#include "programs.hpp"

using namespace ldm;

namespace {

TermPtr P(const std::string& s) { return parse(s, Calculus::Prob); }

double prob_of(const Distribution& d, const std::string& term) {
  TermPtr t = P(term);
  double p = 0;
  for (const auto& [q, u] : d)
    if (alpha_eq(u, t)) p += q;
  return p;
}

}  // namespace

TEST(StepProb, Rules) {
  auto s = step_prob(P("(\\x. U[X] x) |0>"));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->rule, "beta");
  EXPECT_TRUE(alpha_eq(s->reducts[0].second, P("U[X] |0>")));

  s = step_prob(P("U[X] |0>"));
  EXPECT_EQ(s->rule, "unitary");
  EXPECT_TRUE(alpha_eq(s->reducts[0].second, P("|1>")));

  s = step_prob(P("|0> >< |1>"));
  EXPECT_EQ(s->rule, "tensor");
  EXPECT_TRUE(alpha_eq(s->reducts[0].second, P("|01>")));

  s = step_prob(P("meas[1] |+>"));
  EXPECT_EQ(s->rule, "measure");
  ASSERT_EQ(s->reducts.size(), 2u);
  EXPECT_NEAR(s->reducts[0].first, 0.5, 1e-12);
  EXPECT_TRUE(alpha_eq(s->reducts[0].second, P("pair(0, 1, |0>)")));
  EXPECT_TRUE(alpha_eq(s->reducts[1].second, P("pair(1, 1, |1>)")));

  s = step_prob(P("letcase y = pair(1, 1, |1>) in { y ; U[X] y }"));
  EXPECT_EQ(s->rule, "letcase-pair");
  EXPECT_TRUE(alpha_eq(s->reducts[0].second, P("U[X] |1>")));
}

TEST(StepProb, PartialMeasurementKeepsUnmeasuredQubits) {
  // Outcome label bit 0 is qubit 1.
  auto s = step_prob(P("meas[1] |10>"));
  ASSERT_EQ(s->reducts.size(), 1u);
  EXPECT_TRUE(alpha_eq(s->reducts[0].second, P("pair(1, 1, |10>)")));
}

TEST(StepProb, ArgumentBeforeFunction) {
  auto s = step_prob(P("(\\x. x) (U[X] |0>)"));
  EXPECT_EQ(s->rule, "unitary");
  EXPECT_TRUE(alpha_eq(s->reducts[0].second, P("(\\x. x) |1>")));
}

TEST(StepProb, ReducesUnderLambdaButNotIntoBranches) {
  auto s = step_prob(P("\\y. U[X] |0> >< y"));
  ASSERT_TRUE(s);
  EXPECT_TRUE(alpha_eq(s->reducts[0].second, P("\\y. |1> >< y")));
  EXPECT_FALSE(step_prob(P("\\y. letcase x = meas[1] y in { U[X] |0> ; x }")));
}

TEST(StepProb, NormalForms) {
  EXPECT_FALSE(step_prob(P("|0>")));
  EXPECT_FALSE(step_prob(P("\\x. U[H] x")));
  EXPECT_FALSE(step_prob(P("pair(0, 1, |0>)")));
  EXPECT_EQ(stuck_reason(P("\\x. U[H] x"), Calculus::Prob), StuckReason::BlockedOnVariable);
}

TEST(StepProb, IllFormedRedexes) {
  try {
    step_prob(P("|0> |1>"));
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.code, EvalErrorCode::IllFormedRedex);
  }
  EXPECT_THROW(step_prob(P("U[CNOT] |0>")), EvalError);
  EXPECT_THROW(step_prob(P("letcase y = |0> in { y ; y }")), EvalError);
}

// The coin experiment: 24 reduction edges, 6 leaves, |0> w.p. 5/8.
TEST(Trace, CoinExperiment) {
  auto tree = build_trace(P(programs::kCoin));
  auto st = trace_stats(tree);
  EXPECT_EQ(st.edges, 24u);
  EXPECT_EQ(st.leaves, 6u);
  EXPECT_EQ(st.exhausted, 0u);

  // Raw leaves in branch order: the bias coin first, then the program coin.
  Distribution leaves = trace_leaves(tree);
  std::vector<double> expect = {3.0 / 16, 1.0 / 16, 3.0 / 16, 1.0 / 16, 3.0 / 8, 1.0 / 8};
  ASSERT_EQ(leaves.size(), expect.size());
  double total = 0;
  for (std::size_t i = 0; i < expect.size(); ++i) {
    total += leaves[i].first;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  std::vector<double> got;
  for (auto& [p, t] : leaves) got.push_back(p);
  std::sort(got.begin(), got.end());
  std::sort(expect.begin(), expect.end());
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(got[i], expect[i], 1e-12);

  Distribution fin = final_distribution(tree);
  EXPECT_EQ(fin.size(), 2u);
  EXPECT_NEAR(prob_of(fin, "|0>"), 5.0 / 8, 1e-12);
  EXPECT_NEAR(prob_of(fin, "|1>"), 3.0 / 8, 1e-12);
  for (auto& [p, t] : leaves) EXPECT_TRUE(is_value_prob(t));
}

TEST(Trace, EveryNodeKeepsTheRootType) {
  auto tree = build_trace(P(programs::kCoin));
  std::vector<TraceNodePtr> stack = {tree};
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    ASSERT_TRUE(n->type);
    EXPECT_EQ(to_string(*n->type), "1") << print(n->term);
    for (auto& [p, c] : n->children) stack.push_back(c);
  }
}

TEST(Trace, O1Rho) {
  auto tree = build_trace(P(programs::kO1Rho));
  auto st = trace_stats(tree);
  EXPECT_EQ(st.edges, 6u);
  Distribution fin = final_distribution(tree);
  ASSERT_EQ(fin.size(), 2u);
  EXPECT_NEAR(prob_of(fin, programs::kCoinRho), 0.5, 1e-12);
  EXPECT_NEAR(prob_of(fin, "rho[1]{ 3/4, -sqrt(3)/4 ; -sqrt(3)/4, 1/4 }"), 0.5, 1e-12);
}

TEST(Trace, O2Rho) {
  auto tree = build_trace(P(programs::kO2Rho));
  auto st = trace_stats(tree);
  EXPECT_EQ(st.edges, 5u);
  Distribution fin = final_distribution(tree);
  EXPECT_NEAR(prob_of(fin, "|0>"), 0.75, 1e-12);
  EXPECT_NEAR(prob_of(fin, "|1>"), 0.25, 1e-12);
  // Both programs induce the same density: the observational difference
  // lies only in the distribution over states.
  EXPECT_TRUE(approx_eq(distribution_density(fin).matrix(),
                        distribution_density(final_distribution(build_trace(P(programs::kO1Rho)))).matrix(), 1e-12));
}

TEST(Trace, TeleportationPreservesTheState) {
  auto tree = build_trace(P(programs::teleport_applied(programs::kCoinRho)));
  Distribution fin = trace_leaves(tree);
  ASSERT_EQ(fin.size(), 4u);
  for (auto& [p, t] : fin) {
    EXPECT_NEAR(p, 0.25, 1e-12);
    ASSERT_EQ(t->kind, TermKind::Rho);
    ComplexMatrix q3 = trace_out_front(t->rho->matrix(), 2);
    EXPECT_TRUE(approx_eq(q3, P(programs::kCoinRho)->rho->matrix(), 1e-9)) << format_matrix(q3);
  }
}

TEST(Trace, FuelExhaustion) {
  auto tree = build_trace(P(programs::kCoin), 3);
  EXPECT_GT(trace_stats(tree).exhausted, 0u);
  EXPECT_LE(trace_stats(tree).depth, 3u);
  try {
    final_distribution(tree);
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.code, EvalErrorCode::IncompleteTrace);
  }
}

TEST(Trace, ProbabilitiesSumToOne) {
  for (auto& [src, c] : programs::all()) {
    if (c != Calculus::Prob) continue;
    auto tree = build_trace(P(src));
    double total = 0;
    std::vector<TraceNodePtr> stack = {tree};
    while (!stack.empty()) {
      auto n = stack.back();
      stack.pop_back();
      if (n->children.empty()) continue;
      double s = 0;
      for (auto& [p, ch] : n->children) {
        s += p;
        stack.push_back(ch);
      }
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
    for (auto& [p, t] : trace_leaves(tree)) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9) << src;
  }
}

TEST(Trace, Exports) {
  auto tree = build_trace(P(programs::kO2Rho));
  std::string json = trace_to_json(tree);
  EXPECT_NE(json.find("\"children\""), std::string::npos);
  EXPECT_NE(json.find("\"value\": true"), std::string::npos);
  std::string dot = trace_to_dot(tree);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("->"), std::string::npos);
  std::string text = trace_to_text(tree);
  EXPECT_NE(text.find("3/4"), std::string::npos);
}

TEST(Sample, FrequenciesMatchTheTrace) {
  TermPtr t = P(programs::kCoin);
  TermPtr zero = P("|0>");
  int hits = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i)
    if (alpha_eq(sample_run(t, 1000 + i), zero)) ++hits;
  // 5/8 with a 5-sigma band.
  double sigma = std::sqrt(0.625 * 0.375 / n);
  EXPECT_NEAR(double(hits) / n, 0.625, 5 * sigma);
  EXPECT_TRUE(alpha_eq(sample_run(t, 7), sample_run(t, 7)));
}
