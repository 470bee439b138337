/* mimoq - uplink massive MIMO dynamic scheduling and power control simulator
 * Copyright (C) 2026 the mimoq authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MIMOQ_H
#define MIMOQ_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Error codes returned by every fallible entry point. On failure a
 * human-readable message is available from mimoq_last_error(). */
#define MIMOQ_OK 0
#define MIMOQ_ERR_CONFIG 2  /* invalid configuration or unreadable spec file */
#define MIMOQ_ERR_RUNTIME 3 /* solver or simulation failure */
#define MIMOQ_ERR_VERIFY 4  /* a self-check reported FAIL */

/* A configured simulation. Created empty with defaults, populated through
 * mimoq_sim_set key/value calls using the same keys as spec files. */
typedef struct mimoq_sim mimoq_sim;

/* Results of one finished simulation run. */
typedef struct mimoq_result mimoq_result;

/* Library version string, static storage. */
const char *mimoq_version(void);

/* Message for the most recent error on this thread, static thread-local
 * storage valid until the next failing call. Empty string if none. */
const char *mimoq_last_error(void);

/* Free a string returned by the *_json functions. NULL is ignored. */
void mimoq_string_free(char *s);

/* --- single simulation ------------------------------------------------- */

/* New simulation with default settings. Never fails; returns NULL only on
 * allocation failure. */
mimoq_sim *mimoq_sim_create(void);

/* New simulation from the [base] section of a spec file. Variant sections
 * are ignored here; use mimoq_experiment_run for sweeps. */
int mimoq_sim_create_from_file(const char *path, mimoq_sim **out);

/* Set one configuration key, e.g. ("num_users", "8"). Unknown keys and
 * malformed values fail with MIMOQ_ERR_CONFIG. */
int mimoq_sim_set(mimoq_sim *sim, const char *key, const char *value);

/* Validate the accumulated configuration and run. On success *out owns the
 * result and must be released with mimoq_result_destroy. */
int mimoq_sim_run(mimoq_sim *sim, mimoq_result **out);

void mimoq_sim_destroy(mimoq_sim *sim);

/* --- result access ----------------------------------------------------- */

int mimoq_result_num_users(const mimoq_result *res);

/* Per-user scalar metrics; user is 0-based. Returns MIMOQ_ERR_CONFIG for an
 * out-of-range user index. Delay may be +inf for starved users. */
int mimoq_result_throughput(const mimoq_result *res, int user, double *out);
int mimoq_result_delay(const mimoq_result *res, int user, double *out);
int mimoq_result_avg_queue(const mimoq_result *res, int user, double *out);

/* 1 when the fitted tail slope of the transmit queue stays within the
 * stability margin, else 0. */
int mimoq_result_stable(const mimoq_result *res, int user, int *out);

/* Full metrics document as JSON. Caller frees with mimoq_string_free. */
int mimoq_result_summary_json(const mimoq_result *res, char **out);

void mimoq_result_destroy(mimoq_result *res);

/* --- experiments -------------------------------------------------------- */

/* Run every (variant, seed) combination of a spec file.
 *   overrides     optional array of "key=value" strings applied on top of
 *                 the base section (NULL allowed when n_overrides is 0)
 *   out_dir       when non-NULL/non-empty, write experiment.json, summary
 *                 tables and per-variant series CSVs there
 *   jobs          worker threads, values < 1 mean 1
 *   trace         nonzero writes a per-slot CSV ledger per run into out_dir
 *   out_json      when non-NULL receives the aggregate JSON document
 *                 (caller frees with mimoq_string_free)
 */
int mimoq_experiment_run(const char *spec_path, const char *const *overrides, size_t n_overrides,
                         const char *out_dir, int jobs, int trace, char **out_json);

/* --- self checks -------------------------------------------------------- */

/* Run the built-in numerical cross-checks. suite is "oracles",
 * "invariants" or "all" (NULL means "all"). A report with one line per
 * check is always produced when out_report is non-NULL; the return value
 * is MIMOQ_ERR_VERIFY when any check fails. */
int mimoq_verify(const char *suite, char **out_report);

#ifdef __cplusplus
}
#endif

#endif /* MIMOQ_H */
