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

#include "sim.hpp"

#include <map>
#include <string>
#include <vector>

namespace mimoq
{

// Experiment files are line-based "key = value" text with '#' comments. A
// [variant NAME] heading opens a section whose keys override the base keys
// for that variant; an experiment without variant sections runs one variant
// named "default". Values never contain newlines; lists are comma-separated.
using KeyValues = std::map<std::string, std::string>;

struct ExperimentSpec
{
    std::string name = "experiment";
    std::vector<std::uint64_t> seeds = {1};
    KeyValues base;
    std::vector<std::pair<std::string, KeyValues>> variants;
};

// Parses experiment text. Throws std::invalid_argument on malformed lines,
// duplicate variant names or an empty variant name.
ExperimentSpec parse_experiment(const std::string &text);
ExperimentSpec parse_experiment_file(const std::string &path);

// Applies "key=value" strings on top of the base section (command-line
// overrides). Throws std::invalid_argument when an entry lacks '='.
void apply_overrides(ExperimentSpec &spec, const std::vector<std::string> &overrides);

// Builds a runnable configuration from a flat key set. Unknown keys, bad
// enum values and out-of-range numbers throw std::invalid_argument naming
// the offending key.
SimConfig sim_config_from_keys(const KeyValues &kv);

// Merged key set of one variant (base overlaid by the variant section).
KeyValues merged_keys(const ExperimentSpec &spec, std::size_t variant_index);

} // namespace mimoq
