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


// Exercises the shared library through its C header only.

#include "ldm/ldm.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(LDM_FIXTURES) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(CApi, TypecheckAndRun) {
  ldm_config* cfg = ldm_config_new();
  ldm_result* r = nullptr;
  EXPECT_EQ(ldm_typecheck(cfg, "t", "\\x. U[H] x", &r), LDM_OK);
  EXPECT_STREQ(ldm_result_output(r), "1 -o 1\n");
  ldm_result_free(r);

  std::string coin = fixture("coin.ldm");
  EXPECT_EQ(ldm_run(cfg, "coin", coin.c_str(), &r), LDM_OK);
  EXPECT_NE(std::string(ldm_result_output(r)).find("0.625"), std::string::npos);
  ldm_result_free(r);
  ldm_config_free(cfg);
}

TEST(CApi, ErrorStatuses) {
  ldm_config* cfg = ldm_config_new();
  ldm_result* r = nullptr;
  EXPECT_EQ(ldm_typecheck(cfg, "bad", "(\\x. x", &r), LDM_PARSE_ERROR);
  EXPECT_EQ(ldm_result_status(r), LDM_PARSE_ERROR);
  EXPECT_NE(std::string(ldm_result_diagnostics(r)).find("bad:1:"), std::string::npos);
  ldm_result_free(r);
  EXPECT_EQ(ldm_typecheck(cfg, "aff", "\\x. x >< x", &r), LDM_MISMATCH);
  ldm_result_free(r);
  ldm_config_set_calculus(cfg, LDM_MIXED);
  EXPECT_EQ(ldm_run(cfg, nullptr, "meas[1] |+>", &r), LDM_STUCK);
  ldm_result_free(r);
  ldm_config_set_fuel(cfg, 1);
  EXPECT_EQ(ldm_run(cfg, nullptr, "letcase* x = meas[1] |+> in { x ; x }", &r), LDM_FUEL_EXHAUSTED);
  ldm_result_free(r);
  EXPECT_EQ(ldm_run(nullptr, nullptr, "|0>", &r), LDM_INVALID_ARGUMENT);
  EXPECT_EQ(ldm_config_set_fuel(cfg, 0), LDM_INVALID_ARGUMENT);
  EXPECT_EQ(ldm_config_set_tolerance(cfg, -1), LDM_INVALID_ARGUMENT);
  EXPECT_STRNE(ldm_last_error(), "");
  ldm_config_free(cfg);
}

TEST(CApi, Equiv) {
  ldm_config* cfg = ldm_config_new();
  ldm_result* r = nullptr;
  std::string a = fixture("o1_rho.ldm"), b = fixture("o2_rho.ldm");
  EXPECT_EQ(ldm_equiv(cfg, "a", a.c_str(), "b", b.c_str(), &r), LDM_OK);
  EXPECT_EQ(std::string(ldm_result_output(r)).rfind("EQUIVALENT", 0), 0u);
  ldm_result_free(r);
  EXPECT_EQ(ldm_equiv(cfg, "a", "|0>", "b", "|1>", &r), LDM_MISMATCH);
  ldm_result_free(r);
  ldm_config_free(cfg);
}

TEST(CApi, JsonOutput) {
  ldm_config* cfg = ldm_config_new();
  ldm_config_set_output(cfg, LDM_JSON);
  ldm_result* r = nullptr;
  EXPECT_EQ(ldm_denote(cfg, nullptr, "meas[1] |+>", &r), LDM_OK);
  std::string out = ldm_result_output(r);
  EXPECT_NE(out.find("\"triplets\""), std::string::npos);
  EXPECT_NE(out.find("\"b\": 1"), std::string::npos);
  ldm_result_free(r);
  ldm_config_free(cfg);
}

TEST(CApi, Programs) {
  ldm_config* cfg = ldm_config_new();
  ldm_program* p = nullptr;
  std::string coin = fixture("coin_mixed.ldm");
  ASSERT_EQ(ldm_program_parse(cfg, coin.c_str(), &p), LDM_OK);
  EXPECT_STREQ(ldm_program_type(p), "1");
  ASSERT_EQ(ldm_program_qubits(p), 1);
  double buf[8];
  ASSERT_EQ(ldm_program_density(p, buf, 8), LDM_OK);
  EXPECT_NEAR(buf[0], 0.625, 1e-12);
  EXPECT_NEAR(buf[6], 0.375, 1e-12);
  EXPECT_EQ(ldm_program_density(p, buf, 4), LDM_INVALID_ARGUMENT);
  ldm_program_free(p);

  ASSERT_EQ(ldm_program_parse(cfg, "\\x. x", &p), LDM_OK);
  EXPECT_EQ(ldm_program_qubits(p), -1);
  ldm_program_free(p);
  EXPECT_EQ(ldm_program_parse(cfg, "\\x. x >< x", &p), LDM_MISMATCH);
  EXPECT_EQ(p, nullptr);
  ldm_config_free(cfg);
}

TEST(CApi, ToleranceFromEnvironment) {
  ::setenv("LDM_TOLERANCE", "1e-6", 1);
  ldm_config* cfg = ldm_config_new();
  EXPECT_DOUBLE_EQ(ldm_config_tolerance(cfg), 1e-6);
  ldm_config_free(cfg);
  ::unsetenv("LDM_TOLERANCE");
  cfg = ldm_config_new();
  EXPECT_DOUBLE_EQ(ldm_config_tolerance(cfg), 1e-9);
  ldm_config_free(cfg);
}
