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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mimoq
{

// Per-user queueing state (all quantities in bits).
//   reservoir  - transport-layer backlog awaiting admission (L)
//   transmit   - admitted data awaiting physical transmission (Q)
//   virtual_q  - deficit counter coupling admissions to the auxiliary
//                targets (Y); grows when admissions lag behind the targets
struct QueueState
{
    std::vector<double> reservoir;
    std::vector<double> transmit;
    std::vector<double> virtual_q;
    long slot = 0;
};

QueueState make_queue_state(int num_users);

// Bernoulli packet traffic: each slot user k receives a packet of
// packet_bits bits with probability arrival_prob[k].
struct Traffic
{
    std::vector<double> arrival_prob;
    double packet_bits = 0.0;

    void validate() const;
};

// One draw per user from dedicated per-user engines so traffic streams stay
// independent of each other and of everything else.
std::vector<double> generate_arrivals(const Traffic &tr, std::span<std::mt19937_64> engines);

// Applies one slot of queue dynamics:
//   Q' = max(Q - R, 0) + A
//   Y' = max(Y - A, 0) + nu
//   L' = max(L - A, 0) + B
// A is the admitted data (A <= min(L, ...) is the caller's contract; this
// function enforces A <= L), R the offered service, nu the auxiliary target,
// B the new arrivals. Arrivals land in the reservoir after the admission
// decision of the slot, so they become admissible one slot later.
QueueState step_queues(const QueueState &st, std::span<const double> admitted, std::span<const double> rate,
                       std::span<const double> aux, std::span<const double> arrivals);

// 1/2 sum Q^2 + eta/2 sum Y^2
double lyapunov_value(const QueueState &st, double eta);

// Verifies the per-slot sample-path bound
//   Lyap(t+1) - Lyap(t) <= C - sum_k A_k (eta Y_k - Q_k)
//                            + eta sum_k Y_k nu_k - sum_k Q_k R_k
// with C = 1/2 sum_k rate_max_k^2 + (2 eta + 1)/2 * K * admit_cap^2.
// The penalty term of the scheduler objective appears identically on both
// sides of the underlying drift-plus-penalty inequality and is cancelled
// here, which keeps the check finite even for utilities that can be -inf.
bool check_drift_bound(const QueueState &st, const QueueState &next, std::span<const double> admitted,
                       std::span<const double> rate, std::span<const double> aux, double eta, double admit_cap,
                       std::span<const double> rate_max);

} // namespace mimoq
