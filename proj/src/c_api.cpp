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


#include "ldm/ldm.h"

#include <cstdlib>
#include <exception>
#include <memory>
#include <optional>
#include <string>

#include "ldm/denotation.hpp"
#include "ldm/report.hpp"
#include "ldm/syntax.hpp"
#include "ldm/typing.hpp"

struct ldm_config {
  ldm::RunConfig cfg;
};

struct ldm_result {
  ldm::Report report;
};

struct ldm_program {
  ldm::TermPtr term;
  ldm::Calculus calculus;
  double tolerance;
  std::string text;
  std::string type;
  std::optional<ldm::DensityMatrix> density;
};

namespace {

thread_local std::string last_error;

ldm_status invalid(const std::string& msg) {
  last_error = msg;
  return LDM_INVALID_ARGUMENT;
}

template <class F>
ldm_status command(const ldm_config* cfg, ldm_result** out, F&& f) {
  if (!cfg || !out) return invalid("null argument");
  *out = nullptr;
  try {
    auto* r = new ldm_result{f(cfg->cfg)};
    *out = r;
    last_error = r->report.err;
    return static_cast<ldm_status>(r->report.status);
  } catch (const std::exception& e) {
    last_error = e.what();
    *out = new ldm_result{ldm::Report{ldm::Status::RuntimeError, "", std::string(e.what()) + "\n"}};
    return LDM_RUNTIME_ERROR;
  }
}

std::string_view or_default(const char* s, const char* d) { return s ? s : d; }

}  // namespace

extern "C" {

const char* ldm_version(void) { return "1.0.0"; }

const char* ldm_status_name(ldm_status s) {
  switch (s) {
    case LDM_OK: return "ok";
    case LDM_MISMATCH: return "mismatch";
    case LDM_PARSE_ERROR: return "parse error";
    case LDM_FUEL_EXHAUSTED: return "fuel exhausted";
    case LDM_STUCK: return "stuck";
    case LDM_RUNTIME_ERROR: return "runtime error";
    case LDM_INVALID_ARGUMENT: return "invalid argument";
  }
  return "unknown";
}

const char* ldm_last_error(void) { return last_error.c_str(); }

ldm_config* ldm_config_new(void) {
  auto* c = new (std::nothrow) ldm_config{};
  if (!c) return nullptr;
  if (const char* env = std::getenv("LDM_TOLERANCE")) {
    char* end = nullptr;
    const double eps = std::strtod(env, &end);
    if (end != env && *end == '\0' && eps > 0) c->cfg.tolerance = eps;
  }
  return c;
}

void ldm_config_free(ldm_config* cfg) { delete cfg; }

ldm_status ldm_config_set_calculus(ldm_config* cfg, ldm_calculus c) {
  if (!cfg || (c != LDM_PROB && c != LDM_MIXED)) return invalid("bad calculus");
  cfg->cfg.calculus = c == LDM_PROB ? ldm::Calculus::Prob : ldm::Calculus::Mixed;
  return LDM_OK;
}

ldm_status ldm_config_set_tolerance(ldm_config* cfg, double eps) {
  if (!cfg || !(eps > 0)) return invalid("tolerance must be positive");
  cfg->cfg.tolerance = eps;
  return LDM_OK;
}

ldm_status ldm_config_set_fuel(ldm_config* cfg, long fuel) {
  if (!cfg || fuel <= 0) return invalid("fuel must be positive");
  cfg->cfg.fuel = fuel;
  return LDM_OK;
}

ldm_status ldm_config_set_seed(ldm_config* cfg, uint64_t seed) {
  if (!cfg) return invalid("null config");
  cfg->cfg.seed = seed;
  return LDM_OK;
}

ldm_status ldm_config_set_output(ldm_config* cfg, ldm_output out) {
  if (!cfg || out < LDM_TEXT || out > LDM_DOT) return invalid("bad output format");
  cfg->cfg.output = static_cast<ldm::OutputFormat>(out);
  return LDM_OK;
}

ldm_status ldm_config_set_strict_letcase(ldm_config* cfg, int strict) {
  if (!cfg) return invalid("null config");
  cfg->cfg.strict_letcase = strict != 0;
  return LDM_OK;
}

double ldm_config_tolerance(const ldm_config* cfg) { return cfg ? cfg->cfg.tolerance : 0.0; }

ldm_status ldm_typecheck(const ldm_config* cfg, const char* name, const char* source, ldm_result** out) {
  if (!source) return invalid("null source");
  return command(cfg, out, [&](const ldm::RunConfig& c) { return ldm::cmd_typecheck(c, or_default(name, "<input>"), source); });
}

ldm_status ldm_run(const ldm_config* cfg, const char* name, const char* source, ldm_result** out) {
  if (!source) return invalid("null source");
  return command(cfg, out, [&](const ldm::RunConfig& c) { return ldm::cmd_run(c, or_default(name, "<input>"), source); });
}

ldm_status ldm_trace(const ldm_config* cfg, const char* name, const char* source, ldm_result** out) {
  if (!source) return invalid("null source");
  return command(cfg, out, [&](const ldm::RunConfig& c) { return ldm::cmd_trace(c, or_default(name, "<input>"), source); });
}

ldm_status ldm_denote(const ldm_config* cfg, const char* name, const char* source, ldm_result** out) {
  if (!source) return invalid("null source");
  return command(cfg, out, [&](const ldm::RunConfig& c) { return ldm::cmd_denote(c, or_default(name, "<input>"), source); });
}

ldm_status ldm_equiv(const ldm_config* cfg, const char* name_a, const char* source_a, const char* name_b,
                     const char* source_b, ldm_result** out) {
  if (!source_a || !source_b) return invalid("null source");
  return command(cfg, out, [&](const ldm::RunConfig& c) {
    return ldm::cmd_equiv(c, or_default(name_a, "<first>"), source_a, or_default(name_b, "<second>"), source_b);
  });
}

ldm_status ldm_result_status(const ldm_result* r) {
  return r ? static_cast<ldm_status>(r->report.status) : LDM_INVALID_ARGUMENT;
}

const char* ldm_result_output(const ldm_result* r) { return r ? r->report.out.c_str() : ""; }

const char* ldm_result_diagnostics(const ldm_result* r) { return r ? r->report.err.c_str() : ""; }

void ldm_result_free(ldm_result* r) { delete r; }

ldm_status ldm_program_parse(const ldm_config* cfg, const char* source, ldm_program** out) {
  if (!cfg || !source || !out) return invalid("null argument");
  *out = nullptr;
  const ldm::RunConfig& c = cfg->cfg;
  ldm::set_tolerance(c.tolerance);
  auto p = std::make_unique<ldm_program>();
  p->calculus = ldm::detect_calculus(source).value_or(c.calculus);
  p->tolerance = c.tolerance;
  try {
    p->term = ldm::parse(source, p->calculus);
  } catch (const ldm::ParseError& e) {
    last_error = e.span.str() + ": " + e.what();
    return LDM_PARSE_ERROR;
  }
  try {
    ldm::TypingOptions opts;
    opts.closed_branches = c.strict_letcase;
    p->type = ldm::to_string(*ldm::infer({}, p->term, p->calculus, opts));
    p->text = ldm::print(p->term);
    ldm::SemValue sem = ldm::fsem(p->term);
    if (sem.is_matrix()) p->density = sem.matrix();
  } catch (const ldm::TypeError& e) {
    last_error = e.span.str() + ": " + e.what();
    return LDM_MISMATCH;
  } catch (const std::exception& e) {
    last_error = e.what();
    return LDM_RUNTIME_ERROR;
  }
  *out = p.release();
  return LDM_OK;
}

void ldm_program_free(ldm_program* p) { delete p; }

const char* ldm_program_text(const ldm_program* p) { return p ? p->text.c_str() : ""; }

const char* ldm_program_type(const ldm_program* p) { return p ? p->type.c_str() : ""; }

int ldm_program_qubits(const ldm_program* p) { return p && p->density ? int(p->density->qubits()) : -1; }

ldm_status ldm_program_density(const ldm_program* p, double* buf, size_t len) {
  if (!p || !buf) return invalid("null argument");
  if (!p->density) return invalid("the program denotes a function");
  auto entries = p->density->matrix().entries();
  if (len < 2 * entries.size()) return invalid("buffer too small");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    buf[2 * i] = entries[i].real();
    buf[2 * i + 1] = entries[i].imag();
  }
  return LDM_OK;
}

}  // extern "C"
