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

#include <span>
#include <vector>

namespace mimoq
{

// Static power-control policies used as comparison points for the scheduler.
// "active" marks the users a policy serves; everyone else gets exactly zero
// power. The plain policies serve everyone; their "modified" variants mask
// out users with nothing to send (see sim.hpp).

// mask[k] = 1 iff backlog[k] > 0
std::vector<char> active_mask(std::span<const double> backlog);

// Max-min fair power control of the co-located uplink: equalizes every
// active user's SINR at the largest common value, p_k proportional to
// 1/gamma_k with the weakest active user at full power. The same powers are
// optimal under mrc and zf (both share one interference denominator).
std::vector<double> mmf_colocated(const LargeScale &ls, std::span<const char> active);

// Proportionally fair power control: maximizes sum_k ln(ln(1 + sinr_k))
// over the active users by projected gradient ascent in log-power
// coordinates (the objective is concave there). Throws std::runtime_error
// if the projected gradient has not dropped below tol after max_iters.
std::vector<double> pf_colocated(const LargeScale &ls, Combiner comb, std::span<const char> active,
                                 double tol = 1e-7, int max_iters = 200000);

// Max sum rate power control: the weighted-sum-rate solver with unit
// weights on the active users.
std::vector<double> msr_colocated(const LargeScale &ls, Combiner comb, std::span<const char> active);

// Max-min fair power control of the cell-free uplink by alternating
// optimization: decoding weights by the per-user SINR-optimal closed form,
// then the largest equalizable SINR target by bisection with a fixed-point
// feasibility test. min_sinr_trace records the target after each round
// (nondecreasing). Powers are p_k = p_max * eta_k with linear eta in [0,1].
struct CfMmfSolution
{
    std::vector<double> power;
    LsfdWeights weights;
    double min_sinr = 0.0;
    int iterations = 0;
    std::vector<double> min_sinr_trace;
};

CfMmfSolution mmf_cellfree(const LargeScale &ls, std::span<const char> active, double tol = 1e-6,
                           int max_rounds = 100);

} // namespace mimoq
