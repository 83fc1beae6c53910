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


// ldm: command-line front end over the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ldm/ldm.h"

namespace {

struct Options {
  std::string calculus = "prob";
  std::optional<long> fuel;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string output = "text";
  bool strict = false;
  std::vector<std::string> files;
};

void add_common(CLI::App* cmd, Options& o, int nfiles) {
  cmd->add_option("file", o.files, nfiles == 1 ? "program file" : "two program files")
      ->required()
      ->expected(nfiles)
      ->check(CLI::ExistingFile);
  cmd->add_option("--calculus", o.calculus, "prob or mixed; a '#calculus:' line in the file wins")
      ->check(CLI::IsMember({"prob", "mixed"}));
  cmd->add_option("--fuel", o.fuel, "step bound per path (default 10000)")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", o.tol, "numeric tolerance (default 1e-9 or $LDM_TOLERANCE)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "run: sample one execution with this seed");
  cmd->add_option("--output", o.output, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
  cmd->add_flag("--strict-letcase", o.strict, "letcase branches may only mention the bound variable");
}

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density-matrix lambda calculi: type checker, evaluators and denotational semantics"};
  app.set_version_flag("--version", std::string(ldm_version()));
  app.require_subcommand(1);
  Options o;
  add_common(app.add_subcommand("typecheck", "print the inferred type"), o, 1);
  add_common(app.add_subcommand("run", "evaluate to a final distribution or normal form"), o, 1);
  add_common(app.add_subcommand("trace", "print the reduction tree (prob) or step log (mixed)"), o, 1);
  add_common(app.add_subcommand("denote", "print the triplet-set and density-matrix interpretations"), o, 1);
  add_common(app.add_subcommand("equiv", "compare the density-matrix interpretations of two programs"), o, 2);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; usage errors share the invalid-argument code.
    const int code = app.exit(e);
    return code == 0 ? 0 : LDM_INVALID_ARGUMENT;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  ldm_config* cfg = ldm_config_new();
  ldm_config_set_calculus(cfg, o.calculus == "mixed" ? LDM_MIXED : LDM_PROB);
  if (o.fuel) ldm_config_set_fuel(cfg, *o.fuel);
  if (o.tol) ldm_config_set_tolerance(cfg, *o.tol);
  if (o.seed) ldm_config_set_seed(cfg, *o.seed);
  ldm_config_set_output(cfg, o.output == "json" ? LDM_JSON : o.output == "dot" ? LDM_DOT : LDM_TEXT);
  ldm_config_set_strict_letcase(cfg, o.strict);

  std::vector<std::string> sources;
  for (const auto& f : o.files) {
    auto s = slurp(f);
    if (!s) {
      std::cerr << f << ": cannot read file\n";
      ldm_config_free(cfg);
      return LDM_INVALID_ARGUMENT;
    }
    sources.push_back(*s);
  }

  ldm_result* res = nullptr;
  const char* f0 = o.files[0].c_str();
  ldm_status st;
  if (cmd == "typecheck") {
    st = ldm_typecheck(cfg, f0, sources[0].c_str(), &res);
  } else if (cmd == "run") {
    st = ldm_run(cfg, f0, sources[0].c_str(), &res);
  } else if (cmd == "trace") {
    st = ldm_trace(cfg, f0, sources[0].c_str(), &res);
  } else if (cmd == "denote") {
    st = ldm_denote(cfg, f0, sources[0].c_str(), &res);
  } else {
    st = ldm_equiv(cfg, f0, sources[0].c_str(), o.files[1].c_str(), sources[1].c_str(), &res);
  }
  if (res) {
    std::fputs(ldm_result_output(res), stdout);
    std::fputs(ldm_result_diagnostics(res), stderr);
    ldm_result_free(res);
  } else {
    std::cerr << ldm_last_error() << "\n";
  }
  ldm_config_free(cfg);
  return st;
}
