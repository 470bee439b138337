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

#include "channel.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mimoq
{

struct CheckResult
{
    std::string name;
    bool pass = false;
    std::string detail;
};

// Compares a candidate power vector against the zoomed grid reference of the
// weighted-sum-rate problem: both objectives must agree within rel_tol
// (candidate no worse than brute force, and brute force no worse than the
// candidate). Exposed so tests can also feed deliberately wrong candidates.
CheckResult check_wsr_candidate_vs_grid(const LargeScale &ls, std::span<const double> weights, Combiner comb,
                                        std::span<const double> candidate, int grid_points, double rel_tol,
                                        const std::string &name);

// Self-check suites behind the "verify" command. Each check is independent;
// the report lists one line per check. Seeded deterministically.
std::vector<CheckResult> verify_oracles(std::uint64_t seed = 20260823ULL);
std::vector<CheckResult> verify_invariants(std::uint64_t seed = 20260823ULL);
std::vector<CheckResult> verify_all(std::uint64_t seed = 20260823ULL);

bool all_passed(const std::vector<CheckResult> &checks);
std::string format_report(const std::vector<CheckResult> &checks);

} // namespace mimoq
