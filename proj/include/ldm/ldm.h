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


/* C interface to the ldm interpreter, type checker and semantics engine.
 * All handles are opaque. Functions returning ldm_status never throw; on
 * failure the diagnostic is available from the result handle or from
 * ldm_last_error(). Strings returned by the library stay valid until the
 * owning handle is freed. */

#ifndef LDM_LDM_H_
#define LDM_LDM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LDM_API __declspec(dllexport)
#else
#define LDM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum ldm_status {
  LDM_OK = 0,
  LDM_MISMATCH = 1, /* type error, or distinct programs */
  LDM_PARSE_ERROR = 2,
  LDM_FUEL_EXHAUSTED = 3,
  LDM_STUCK = 4,
  LDM_RUNTIME_ERROR = 5,
  LDM_INVALID_ARGUMENT = 6,
} ldm_status;

typedef enum ldm_calculus { LDM_PROB = 0, LDM_MIXED = 1 } ldm_calculus;

typedef enum ldm_output { LDM_TEXT = 0, LDM_JSON = 1, LDM_DOT = 2 } ldm_output;

typedef struct ldm_config ldm_config;
typedef struct ldm_result ldm_result;
typedef struct ldm_program ldm_program;

LDM_API const char* ldm_version(void);
LDM_API const char* ldm_status_name(ldm_status s);
/* Message of the last failure on this thread, or "". */
LDM_API const char* ldm_last_error(void);

/* Defaults: prob, tolerance 1e-9 (or $LDM_TOLERANCE), fuel 10000, no seed,
 * text output, generalized letcase typing. */
LDM_API ldm_config* ldm_config_new(void);
LDM_API void ldm_config_free(ldm_config* cfg);
LDM_API ldm_status ldm_config_set_calculus(ldm_config* cfg, ldm_calculus c);
LDM_API ldm_status ldm_config_set_tolerance(ldm_config* cfg, double eps);
LDM_API ldm_status ldm_config_set_fuel(ldm_config* cfg, long fuel);
LDM_API ldm_status ldm_config_set_seed(ldm_config* cfg, uint64_t seed);
LDM_API ldm_status ldm_config_set_output(ldm_config* cfg, ldm_output out);
LDM_API ldm_status ldm_config_set_strict_letcase(ldm_config* cfg, int strict);
LDM_API double ldm_config_tolerance(const ldm_config* cfg);

/* Commands. `name` labels diagnostics and may be NULL. *out receives a
 * result handle even when the returned status is not LDM_OK, except for
 * LDM_INVALID_ARGUMENT. */
LDM_API ldm_status ldm_typecheck(const ldm_config* cfg, const char* name, const char* source, ldm_result** out);
LDM_API ldm_status ldm_run(const ldm_config* cfg, const char* name, const char* source, ldm_result** out);
LDM_API ldm_status ldm_trace(const ldm_config* cfg, const char* name, const char* source, ldm_result** out);
LDM_API ldm_status ldm_denote(const ldm_config* cfg, const char* name, const char* source, ldm_result** out);
LDM_API ldm_status ldm_equiv(const ldm_config* cfg, const char* name_a, const char* source_a, const char* name_b,
                             const char* source_b, ldm_result** out);

LDM_API ldm_status ldm_result_status(const ldm_result* r);
/* Standard-output text. */
LDM_API const char* ldm_result_output(const ldm_result* r);
/* Diagnostics. */
LDM_API const char* ldm_result_diagnostics(const ldm_result* r);
LDM_API void ldm_result_free(ldm_result* r);

/* Programs: a parsed, typechecked term. */
LDM_API ldm_status ldm_program_parse(const ldm_config* cfg, const char* source, ldm_program** out);
LDM_API void ldm_program_free(ldm_program* p);
LDM_API const char* ldm_program_text(const ldm_program* p);
LDM_API const char* ldm_program_type(const ldm_program* p);
/* Qubit count of the density interpretation, or -1 at function type. */
LDM_API int ldm_program_qubits(const ldm_program* p);
/* Writes the 4^n complex entries of the density interpretation, row-major,
 * as interleaved (re, im) pairs; `len` counts doubles. */
LDM_API ldm_status ldm_program_density(const ldm_program* p, double* buf, size_t len);

#ifdef __cplusplus
}
#endif

#endif /* LDM_LDM_H_ */
