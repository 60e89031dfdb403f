/* Copyright 2026 The conffuzz Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libconffuzz.
 *
 * Conventions:
 *   - Every fallible function returns cf_status. On failure the message is
 *     available from cf_last_error() on the calling thread until the next
 *     call into the library.
 *   - Objects are opaque handles released with the matching *_free function.
 *     Passing NULL to a *_free function is a no-op.
 *   - Strings returned through `char**` are owned by the caller and released
 *     with cf_string_free().
 *   - Grammar and target handles are immutable after creation and may be
 *     shared between threads.
 */

#ifndef CONFFUZZ_CONFFUZZ_H_
#define CONFFUZZ_CONFFUZZ_H_

#include <stddef.h>
#include <stdint.h>

#if defined(CONFFUZZ_BUILDING_LIBRARY)
#define CONFFUZZ_API __attribute__((visibility("default")))
#else
#define CONFFUZZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cf_status {
  CF_OK = 0,
  CF_ERR_INVALID_ARGUMENT = 1,
  CF_ERR_IO = 2,
  CF_ERR_MALFORMED_JSON = 3,
  CF_ERR_BAD_TOKEN_NAME = 4,
  CF_ERR_UNDEFINED_TOKEN_REF = 5,
  CF_ERR_NO_FINITE_DERIVATION = 6,
  CF_ERR_MISSING_START = 7,
  CF_ERR_DEPTH_INFEASIBLE = 8,
  CF_ERR_INVALID_TREE = 9,
  CF_ERR_ALL_ZERO_WEIGHTS = 10,
  CF_ERR_SYNTAX = 11,
  CF_ERR_DUPLICATE_NAME = 12,
  CF_ERR_PATH_NOT_FOUND = 13,
  CF_ERR_NOT_A_SCALAR = 14,
  CF_ERR_SPAWN_FAILURE = 15,
  CF_ERR_EMPTY_CORPUS = 16,
  CF_ERR_NOT_A_CRASH = 17,
  CF_ERR_NON_REPRODUCIBLE = 18,
  CF_ERR_MALFORMED_TEST_LINE = 19,
  CF_ERR_BACKEND = 20,
  CF_ERR_INTERRUPTED = 21,
  /* A grammar rejected the input (cf_minimize_text). */
  CF_ERR_NOT_IN_GRAMMAR = 22,
  CF_ERR_INTERNAL = 99
} cf_status;

CONFFUZZ_API const char* cf_version(void);
CONFFUZZ_API const char* cf_status_name(cf_status status);
CONFFUZZ_API const char* cf_last_error(void);
CONFFUZZ_API void cf_string_free(char* s);

/* ---- Grammars ---------------------------------------------------------- */

typedef struct cf_grammar cf_grammar;

CONFFUZZ_API cf_status cf_grammar_load(const char* path, int strict,
                                       cf_grammar** out);
CONFFUZZ_API cf_status cf_grammar_parse(const char* json_text, int strict,
                                        cf_grammar** out);
CONFFUZZ_API void cf_grammar_free(cf_grammar* grammar);
CONFFUZZ_API size_t cf_grammar_token_count(const cf_grammar* grammar);
CONFFUZZ_API size_t cf_grammar_rule_count(const cf_grammar* grammar);
/* Unparsed text of the tree generated from `seed`. */
CONFFUZZ_API cf_status cf_grammar_generate(const cf_grammar* grammar,
                                           uint64_t seed, uint32_t max_depth,
                                           char** out_text);

/* ---- Targets ----------------------------------------------------------- */

typedef enum cf_outcome_class {
  CF_OUTCOME_OK = 0,
  CF_OUTCOME_REJECT = 1,
  CF_OUTCOME_CRASH = 2,
  CF_OUTCOME_TIMEOUT = 3
} cf_outcome_class;

typedef struct cf_exec_result {
  cf_outcome_class outcome;
  /* Reject: exit code. Crash: crash id or signal number. */
  int code;
  /* Owned; release with cf_exec_result_clear(). */
  char* stderr_excerpt;
  /* Branch identifiers, one per line, sorted. */
  char* branches;
  /* Crash dedup key, NULL for other outcomes. */
  char* dedup_key;
} cf_exec_result;

typedef struct cf_target cf_target;

/* `builtin:<name>` or `exec:<command template with {input}>`. */
CONFFUZZ_API cf_status cf_target_create(const char* spec, uint32_t timeout_ms,
                                        cf_target** out);
CONFFUZZ_API void cf_target_free(cf_target* target);
CONFFUZZ_API cf_status cf_target_execute(const cf_target* target,
                                         const char* input, size_t input_len,
                                         cf_exec_result* out);
CONFFUZZ_API void cf_exec_result_clear(cf_exec_result* result);

/* The gNB validator, in process. */
CONFFUZZ_API cf_status cf_validate_gnb_text(const char* text, size_t len,
                                            cf_exec_result* out);

/* ---- Campaigns --------------------------------------------------------- */

typedef struct cf_campaign_config {
  const cf_grammar* grammar;
  const cf_target* target;
  uint64_t seed;
  uint64_t max_execs;
  uint32_t workers;
  /* Regenerate, rule swap, splice, scalar tweak. */
  double weights[4];
  uint32_t energy_per_entry;
  uint32_t max_depth;
  /* Configuration file diffed against crashes; NULL for the built-in
   * initial gNB configuration. */
  const char* baseline_path;
  int minimize_crashes;
  /* NULL to keep everything in memory. */
  const char* out_dir;
  uint32_t progress_interval_ms;
} cf_campaign_config;

typedef struct cf_campaign_stats {
  uint64_t execs;
  uint64_t crashes_unique;
  uint64_t crashes_total;
  uint64_t timeouts;
  uint64_t corpus_size;
  double execs_per_sec;
  uint64_t seed;
  int64_t started_unix_ms;
  int64_t finished_unix_ms;
  int interrupted;
} cf_campaign_stats;

typedef void (*cf_progress_fn)(const cf_campaign_stats* stats, void* user);

typedef struct cf_campaign cf_campaign;

/* Fills in defaults; grammar and target stay NULL. */
CONFFUZZ_API void cf_campaign_config_init(cf_campaign_config* config);
CONFFUZZ_API cf_status cf_campaign_create(const cf_campaign_config* config,
                                          cf_campaign** out);
CONFFUZZ_API void cf_campaign_free(cf_campaign* campaign);
CONFFUZZ_API cf_status cf_campaign_run(cf_campaign* campaign,
                                       cf_progress_fn progress, void* user,
                                       cf_campaign_stats* out);
/* Async-signal-safe. */
CONFFUZZ_API void cf_campaign_request_stop(cf_campaign* campaign);
CONFFUZZ_API size_t cf_campaign_crash_count(const cf_campaign* campaign);
CONFFUZZ_API cf_status cf_campaign_crash_key(const cf_campaign* campaign,
                                             size_t index, char** out_key);
/* Runs `input` once through the campaign's crash path. */
CONFFUZZ_API cf_status cf_campaign_replay(cf_campaign* campaign,
                                          const char* input,
                                          cf_exec_result* out);

/* ---- Minimization and triage ------------------------------------------ */

typedef struct cf_minimize_result {
  char* text;
  char* dedup_key;
  size_t tree_size;
  size_t minimized_tree_size;
  uint64_t executions;
} cf_minimize_result;

/* CF_ERR_NOT_IN_GRAMMAR when the grammar does not derive `input`. */
CONFFUZZ_API cf_status cf_minimize_text(const cf_grammar* grammar,
                                        const cf_target* target,
                                        const char* input,
                                        cf_minimize_result* out);
CONFFUZZ_API void cf_minimize_result_clear(cf_minimize_result* result);

typedef enum cf_report_format {
  CF_REPORT_TEXT = 0,
  CF_REPORT_JSON = 1
} cf_report_format;

typedef struct cf_triage cf_triage;

/* `baseline_path` NULL selects the built-in initial gNB configuration. */
CONFFUZZ_API cf_status cf_triage_create(const char* baseline_path,
                                        cf_triage** out);
CONFFUZZ_API void cf_triage_free(cf_triage* triage);
/* Replaces the watched parameter paths (default: the eight gNB fields). */
CONFFUZZ_API cf_status cf_triage_set_watch(cf_triage* triage,
                                           const char* const* paths,
                                           size_t count);
CONFFUZZ_API cf_status cf_triage_add_crash_dir(cf_triage* triage,
                                               const char* dir);
CONFFUZZ_API cf_status cf_triage_add_input(cf_triage* triage,
                                           const char* path,
                                           const char* label);
CONFFUZZ_API cf_status cf_triage_render(const cf_triage* triage,
                                        cf_report_format format,
                                        char** out_text);

/* ---- Configuration files ---------------------------------------------- */

CONFFUZZ_API cf_status cf_config_canonicalize(const char* text,
                                              char** out_text);
CONFFUZZ_API cf_status cf_config_get_param(const char* text, const char* path,
                                           char** out_value);
/* Writes initial.conf and case1.conf .. case5.conf into `dir`. */
CONFFUZZ_API cf_status cf_write_table1_fixtures(const char* dir);

/* ---- Parameter documentation ------------------------------------------ */

/* `backend` is `glossary:<file>` or `http:<url>`. On CF_ERR_BACKEND the
 * partial report is still returned and *out_partial is set. */
CONFFUZZ_API cf_status cf_explain(const char* log_path, const char* src_dir,
                                  const char* backend, char** out_report,
                                  int* out_partial);

#ifdef __cplusplus
}
#endif

#endif /* CONFFUZZ_CONFFUZZ_H_ */
