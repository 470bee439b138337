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

#pragma once

#include "config.hpp"

#include <string>
#include <vector>

namespace mimoq
{

struct RunResult
{
    std::string variant;
    std::uint64_t seed = 0;
    Metrics metrics;
};

struct ExperimentResult
{
    std::string name;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> variant_names;
    std::vector<RunResult> runs; // variant-major, then seed order
};

// Runs every variant for every seed. jobs > 1 distributes runs over worker
// threads (results are position-indexed, so the output is identical for any
// job count). A nonempty trace_dir streams a per-slot decision ledger to
// trace_<variant>_s<seed>.csv in that directory.
ExperimentResult run_experiment(const ExperimentSpec &spec, int jobs = 1, const std::string &trace_dir = "");

// Deterministic JSON rendition of the results (stable key order, no
// timestamps), including the formatted summary table under "table".
std::string experiment_json(const ExperimentResult &r);

// JSON document for a single run, same per-run schema as experiment_json.
std::string metrics_json(const Metrics &m);

// Fixed-width summary: one row per variant and user with seed-averaged
// throughput, delay and the stability verdict.
std::string format_table(const ExperimentResult &r);

// Writes experiment.json, throughput.csv, delay.csv and per-variant series
// CSVs (first seed) into out_dir, which is created if needed.
void write_experiment_outputs(const ExperimentResult &r, const std::string &out_dir);

} // namespace mimoq
