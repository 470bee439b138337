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

/* Compiled as plain C on purpose: the public header must stay C-clean. */

#include <mimoq/mimoq.h>

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define CHECK(cond)                                                                                                    \
    do                                                                                                                 \
    {                                                                                                                  \
        if (!(cond))                                                                                                   \
        {                                                                                                              \
            failures++;                                                                                                \
            fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond);                                            \
        }                                                                                                              \
    } while (0)

static void set(mimoq_sim *sim, const char *key, const char *value)
{
    int rc = mimoq_sim_set(sim, key, value);
    if (rc != MIMOQ_OK)
    {
        failures++;
        fprintf(stderr, "FAIL set %s=%s: %s\n", key, value, mimoq_last_error());
    }
}

static void check_single_run(void)
{
    mimoq_sim *sim = mimoq_sim_create();
    mimoq_result *res = NULL;
    double thpt = 0.0, delay = 0.0, queue = 0.0, arr = 0.0;
    int stable = -1;
    char *json = NULL;

    CHECK(sim != NULL);
    set(sim, "num_users", "3");
    set(sim, "snr_db", "0, 5, 10");
    set(sim, "arrival_prob", "0.5");
    set(sim, "slots", "400");
    set(sim, "seed", "7");

    /* unknown keys and bad values are rejected without clobbering state */
    CHECK(mimoq_sim_set(sim, "bogus_key", "1") == MIMOQ_ERR_CONFIG);
    CHECK(strlen(mimoq_last_error()) > 0);
    CHECK(mimoq_sim_set(sim, "slots", "not_a_number") == MIMOQ_ERR_CONFIG);
    CHECK(strstr(mimoq_last_error(), "slots") != NULL);

    CHECK(mimoq_sim_run(sim, &res) == MIMOQ_OK);
    CHECK(res != NULL);
    CHECK(mimoq_result_num_users(res) == 3);

    CHECK(mimoq_result_throughput(res, 0, &thpt) == MIMOQ_OK);
    CHECK(thpt > 0.0);
    CHECK(mimoq_result_delay(res, 1, &delay) == MIMOQ_OK);
    CHECK(delay >= 0.0);
    CHECK(mimoq_result_avg_queue(res, 2, &queue) == MIMOQ_OK);
    CHECK(queue >= 0.0);
    CHECK(mimoq_result_stable(res, 0, &stable) == MIMOQ_OK);
    CHECK(stable == 0 || stable == 1);
    CHECK(mimoq_result_throughput(res, 3, &arr) == MIMOQ_ERR_CONFIG);
    CHECK(mimoq_result_throughput(res, -1, &arr) == MIMOQ_ERR_CONFIG);

    CHECK(mimoq_result_summary_json(res, &json) == MIMOQ_OK);
    CHECK(json != NULL);
    CHECK(strstr(json, "\"users\"") != NULL);
    CHECK(strstr(json, "\"throughput\"") != NULL);
    mimoq_string_free(json);

    /* a rerun under the same settings reproduces the same throughput */
    {
        mimoq_result *res2 = NULL;
        double t2 = 0.0;
        CHECK(mimoq_sim_run(sim, &res2) == MIMOQ_OK);
        CHECK(mimoq_result_throughput(res2, 0, &t2) == MIMOQ_OK);
        CHECK(t2 == thpt);
        mimoq_result_destroy(res2);
    }

    mimoq_result_destroy(res);
    mimoq_sim_destroy(sim);
}

static void check_invalid_config_run(void)
{
    mimoq_sim *sim = mimoq_sim_create();
    mimoq_sim *from_file = NULL;
    CHECK(sim != NULL);
    /* cross-field rule: interference nulling needs antennas > users */
    set(sim, "num_users", "4");
    set(sim, "snr_db", "0, 3, 6, 9");
    set(sim, "arrival_prob", "0.5");
    CHECK(mimoq_sim_set(sim, "num_antennas", "4") == MIMOQ_OK);
    CHECK(mimoq_sim_set(sim, "combiner", "zf") == MIMOQ_ERR_CONFIG);
    mimoq_sim_destroy(sim);

    CHECK(mimoq_sim_create_from_file("/nonexistent/never.spec", &from_file) == MIMOQ_ERR_CONFIG);
    CHECK(from_file == NULL);
}

static void check_experiment(void)
{
    const char *path = "capi_experiment.spec";
    const char *overrides[2];
    char *json = NULL;
    FILE *f = fopen(path, "w");
    if (f == NULL)
    {
        failures++;
        fprintf(stderr, "FAIL cannot write %s\n", path);
        return;
    }
    fputs("name = capi\n"
          "seeds = 1\n"
          "num_users = 2\n"
          "snr_db = 0, 10\n"
          "arrival_prob = 0.5\n"
          "slots = 150\n"
          "[variant base]\n"
          "[variant static]\n"
          "scheduler = mmf\n",
          f);
    fclose(f);

    overrides[0] = "slots=120";
    overrides[1] = "seeds=2,3";
    CHECK(mimoq_experiment_run(path, overrides, 2, NULL, 2, 0, &json) == MIMOQ_OK);
    CHECK(json != NULL);
    CHECK(strstr(json, "\"name\": \"capi\"") != NULL);
    CHECK(strstr(json, "\"static\"") != NULL);
    CHECK(strstr(json, "\"table\"") != NULL);
    mimoq_string_free(json);

    CHECK(mimoq_experiment_run("/nonexistent/never.spec", NULL, 0, NULL, 1, 0, NULL) == MIMOQ_ERR_CONFIG);
    remove(path);
}

static void check_sim_from_file(void)
{
    const char *path = "capi_single.spec";
    mimoq_sim *sim = NULL;
    mimoq_result *res = NULL;
    FILE *f = fopen(path, "w");
    if (f == NULL)
    {
        failures++;
        return;
    }
    fputs("num_users = 2\nsnr_db = 0, 10\narrival_prob = 0.4\nslots = 100\n", f);
    fclose(f);
    CHECK(mimoq_sim_create_from_file(path, &sim) == MIMOQ_OK);
    CHECK(sim != NULL);
    CHECK(mimoq_sim_run(sim, &res) == MIMOQ_OK);
    CHECK(mimoq_result_num_users(res) == 2);
    mimoq_result_destroy(res);
    mimoq_sim_destroy(sim);
    remove(path);
}

static void check_verify_interface(void)
{
    char *report = NULL;
    /* the invariants suite is the cheaper of the two */
    int rc = mimoq_verify("invariants", &report);
    CHECK(rc == MIMOQ_OK);
    CHECK(report != NULL);
    CHECK(strstr(report, "checks passed") != NULL);
    mimoq_string_free(report);

    CHECK(mimoq_verify("no_such_suite", NULL) == MIMOQ_ERR_CONFIG);
}

static void check_version_and_null_safety(void)
{
    CHECK(mimoq_version() != NULL);
    CHECK(strlen(mimoq_version()) > 0);
    CHECK(mimoq_sim_set(NULL, "a", "b") == MIMOQ_ERR_CONFIG);
    CHECK(mimoq_sim_run(NULL, NULL) == MIMOQ_ERR_CONFIG);
    CHECK(mimoq_result_num_users(NULL) == 0);
    mimoq_string_free(NULL);
    mimoq_sim_destroy(NULL);
    mimoq_result_destroy(NULL);
}

int run_c_checks(void)
{
    check_single_run();
    check_invalid_config_run();
    check_experiment();
    check_sim_from_file();
    check_verify_interface();
    check_version_and_null_safety();
    if (failures == 0)
        printf("all C interface checks passed\n");
    else
        printf("%d C interface checks failed\n", failures);
    return failures == 0 ? 0 : 1;
}
