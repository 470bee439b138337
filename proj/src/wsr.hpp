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

struct WsrDiagnostics
{
    int iterations = 0;       // outer evaluations (co-located) / rounds (cell-free)
    double objective = 0.0;   // sum_k w_k R_k at the returned point, bits/slot
    double objective_delta = 0.0; // last relative objective change (cell-free)
    double kkt_residual = 0.0;    // relative stationarity residual (co-located)
    double s = 0.0;               // interference scale at the optimum (co-located)
};

struct WsrSolution
{
    std::vector<double> power;
    LsfdWeights weights; // populated in cell-free mode only
    WsrDiagnostics diag;
};

// Equivalent concave form of the co-located weighted-sum-rate problem. With
// s = 1/(1 + sum_j b_j p_j) and x_k = b_k p_k s the objective becomes
// sum_k w_k log(1 + a_k x_k) over the simplex slice sum x = 1 - s,
// 0 <= x_k <= b_k p_max s.
//   mrc : a_k = M gamma_k / beta_k,           b_k = beta_k
//   zf  : a_k = (M-K) gamma_k/(beta_k-gamma_k), b_k = beta_k - gamma_k
struct TransformedProblem
{
    std::vector<double> gain;  // a_k
    std::vector<double> slope; // b_k
    double p_max = 0.0;
};

TransformedProblem wsr_transform(const LargeScale &ls, Combiner comb);

// Inner water-filling step of the transformed problem: maximize
// sum_k w_k ln(1 + g_k x_k) subject to sum_k x_k = budget, 0 <= x_k <= cap_k.
// Zero-weight coordinates stay at zero.
struct InnerSolution
{
    std::vector<double> x;
    double multiplier = 0.0;   // simplex dual variable
    double kkt_residual = 0.0; // relative stationarity violation
    double value = 0.0;        // natural-log objective
};

InnerSolution wsr_inner_allocate(std::span<const double> weights, std::span<const double> gain,
                                 std::span<const double> caps, double budget);

// Maximizes sum_k w_k R_k(p) over 0 <= p <= p_max for the co-located uplink.
// Golden-section search over the interference scale s (the transformed
// objective is concave in s on the restriction where only positively
// weighted users transmit), with the exact water-filling step inside.
// Users with zero weight receive exactly zero power.
WsrSolution solve_wsr_colocated(const LargeScale &ls, std::span<const double> weights, Combiner comb);

// Maximizes sum_k w_k R_k(p, a) jointly over powers and decoding weights for
// the cell-free uplink via block-coordinate weighted-MMSE updates. Each
// block step solves its subproblem exactly, and extrapolation jumps are kept
// only when they improve the objective, so the objective restricted to the
// positively weighted users is nondecreasing over rounds. Stops when the
// relative objective change drops below tol or after max_rounds rounds.
// An optional previous solution warm-starts the iteration.
WsrSolution solve_wsr_cellfree(const LargeScale &ls, std::span<const double> weights, int max_rounds = 200,
                               double tol = 1e-6, const WsrSolution *warm = nullptr);

// Largest achievable per-user rate, used to bound the per-slot drift:
// the user alone at full power, with the decoding weights that maximize its
// single-user SINR in the cell-free case.
std::vector<double> rmax_per_user(const LargeScale &ls, Combiner comb);

} // namespace mimoq
