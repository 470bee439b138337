// mimoq - uplink massive MIMO dynamic scheduling and power control simulator
// Copyright (C) 2026 the mimoq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mimoq/mimoq.h"

#include "config.hpp"
#include "experiment.hpp"
#include "sim.hpp"
#include "verify.hpp"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>

namespace
{

thread_local std::string g_last_error;

void set_error(const char *msg)
{
    g_last_error = msg ? msg : "";
}

char *dup_string(const std::string &s)
{
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out != nullptr)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// classify C++ exceptions into the C error codes
template <typename Fn> int guarded(Fn &&fn)
{
    try
    {
        return fn();
    }
    catch (const std::invalid_argument &e)
    {
        set_error(e.what());
        return MIMOQ_ERR_CONFIG;
    }
    catch (const std::bad_alloc &)
    {
        set_error("out of memory");
        return MIMOQ_ERR_RUNTIME;
    }
    catch (const std::exception &e)
    {
        set_error(e.what());
        return MIMOQ_ERR_RUNTIME;
    }
    catch (...)
    {
        set_error("unknown error");
        return MIMOQ_ERR_RUNTIME;
    }
}

} // namespace

struct mimoq_sim
{
    mimoq::KeyValues keys;
};

struct mimoq_result
{
    mimoq::Metrics metrics;
};

extern "C" {

const char *mimoq_version(void)
{
    return "1.0.0";
}

const char *mimoq_last_error(void)
{
    return g_last_error.c_str();
}

void mimoq_string_free(char *s)
{
    std::free(s);
}

mimoq_sim *mimoq_sim_create(void)
{
    return new (std::nothrow) mimoq_sim{};
}

int mimoq_sim_create_from_file(const char *path, mimoq_sim **out)
{
    if (path == nullptr || out == nullptr)
    {
        set_error("null argument");
        return MIMOQ_ERR_CONFIG;
    }
    *out = nullptr;
    return guarded([&] {
        mimoq::ExperimentSpec spec = mimoq::parse_experiment_file(path);
        auto *sim = new mimoq_sim{};
        sim->keys = spec.base;
        *out = sim;
        return MIMOQ_OK;
    });
}

int mimoq_sim_set(mimoq_sim *sim, const char *key, const char *value)
{
    if (sim == nullptr || key == nullptr || value == nullptr)
    {
        set_error("null argument");
        return MIMOQ_ERR_CONFIG;
    }
    return guarded([&] {
        mimoq::KeyValues probe = sim->keys;
        probe[key] = value;
        mimoq::sim_config_from_keys(probe); // reject bad keys/values eagerly
        sim->keys = std::move(probe);
        return MIMOQ_OK;
    });
}

int mimoq_sim_run(mimoq_sim *sim, mimoq_result **out)
{
    if (sim == nullptr || out == nullptr)
    {
        set_error("null argument");
        return MIMOQ_ERR_CONFIG;
    }
    *out = nullptr;
    return guarded([&] {
        mimoq::SimConfig cfg = mimoq::sim_config_from_keys(sim->keys);
        auto *res = new mimoq_result{mimoq::run_simulation(cfg)};
        *out = res;
        return MIMOQ_OK;
    });
}

void mimoq_sim_destroy(mimoq_sim *sim)
{
    delete sim;
}

int mimoq_result_num_users(const mimoq_result *res)
{
    return res == nullptr ? 0 : res->metrics.num_users;
}

namespace
{

int user_metric(const mimoq_result *res, int user, double *out, double mimoq::UserMetrics::*field)
{
    if (res == nullptr || out == nullptr || user < 0 || user >= res->metrics.num_users)
    {
        set_error("bad result handle or user index");
        return MIMOQ_ERR_CONFIG;
    }
    *out = res->metrics.users[static_cast<std::size_t>(user)].*field;
    return MIMOQ_OK;
}

} // namespace

int mimoq_result_throughput(const mimoq_result *res, int user, double *out)
{
    return user_metric(res, user, out, &mimoq::UserMetrics::throughput);
}

int mimoq_result_delay(const mimoq_result *res, int user, double *out)
{
    return user_metric(res, user, out, &mimoq::UserMetrics::delay);
}

int mimoq_result_avg_queue(const mimoq_result *res, int user, double *out)
{
    return user_metric(res, user, out, &mimoq::UserMetrics::avg_queue);
}

int mimoq_result_stable(const mimoq_result *res, int user, int *out)
{
    if (res == nullptr || out == nullptr || user < 0 || user >= res->metrics.num_users)
    {
        set_error("bad result handle or user index");
        return MIMOQ_ERR_CONFIG;
    }
    *out = res->metrics.users[static_cast<std::size_t>(user)].stable ? 1 : 0;
    return MIMOQ_OK;
}

int mimoq_result_summary_json(const mimoq_result *res, char **out)
{
    if (res == nullptr || out == nullptr)
    {
        set_error("null argument");
        return MIMOQ_ERR_CONFIG;
    }
    *out = nullptr;
    return guarded([&] {
        *out = dup_string(mimoq::metrics_json(res->metrics));
        if (*out == nullptr)
        {
            set_error("out of memory");
            return MIMOQ_ERR_RUNTIME;
        }
        return MIMOQ_OK;
    });
}

void mimoq_result_destroy(mimoq_result *res)
{
    delete res;
}

int mimoq_experiment_run(const char *spec_path, const char *const *overrides, size_t n_overrides,
                         const char *out_dir, int jobs, int trace, char **out_json)
{
    if (spec_path == nullptr)
    {
        set_error("null spec path");
        return MIMOQ_ERR_CONFIG;
    }
    if (out_json != nullptr)
        *out_json = nullptr;
    return guarded([&] {
        mimoq::ExperimentSpec spec = mimoq::parse_experiment_file(spec_path);
        std::vector<std::string> ov;
        for (size_t i = 0; i < n_overrides; i++)
        {
            if (overrides == nullptr || overrides[i] == nullptr)
            {
                set_error("null override entry");
                return MIMOQ_ERR_CONFIG;
            }
            ov.emplace_back(overrides[i]);
        }
        mimoq::apply_overrides(spec, ov);
        std::string dir = out_dir ? out_dir : "";
        std::string trace_dir = (trace != 0 && !dir.empty()) ? dir : "";
        mimoq::ExperimentResult result = mimoq::run_experiment(spec, jobs < 1 ? 1 : jobs, trace_dir);
        if (!dir.empty())
            mimoq::write_experiment_outputs(result, dir);
        if (out_json != nullptr)
        {
            *out_json = dup_string(mimoq::experiment_json(result));
            if (*out_json == nullptr)
            {
                set_error("out of memory");
                return MIMOQ_ERR_RUNTIME;
            }
        }
        return MIMOQ_OK;
    });
}

int mimoq_verify(const char *suite, char **out_report)
{
    if (out_report != nullptr)
        *out_report = nullptr;
    std::string which = suite ? suite : "all";
    return guarded([&]() -> int {
        std::vector<mimoq::CheckResult> checks;
        if (which == "oracles")
            checks = mimoq::verify_oracles();
        else if (which == "invariants")
            checks = mimoq::verify_invariants();
        else if (which == "all")
            checks = mimoq::verify_all();
        else
        {
            set_error(("unknown verify suite '" + which + "', expected oracles, invariants or all").c_str());
            return MIMOQ_ERR_CONFIG;
        }
        std::string report = mimoq::format_report(checks);
        if (out_report != nullptr)
        {
            *out_report = dup_string(report);
            if (*out_report == nullptr)
            {
                set_error("out of memory");
                return MIMOQ_ERR_RUNTIME;
            }
        }
        if (!mimoq::all_passed(checks))
        {
            set_error("one or more self-checks failed");
            return MIMOQ_ERR_VERIFY;
        }
        return MIMOQ_OK;
    });
}

} // extern "C"
