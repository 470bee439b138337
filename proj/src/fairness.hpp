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

#include <span>
#include <vector>

namespace mimoq
{

// Concave utility shaping the long-term admitted throughput:
//   mmf : f(x) = min_k x_k          (max-min fairness)
//   pf  : f(x) = sum_k ln(x_k)      (proportional fairness)
//   msr : f(x) = sum_k x_k          (max sum rate)
enum class Fairness
{
    mmf,
    pf,
    msr
};

// Knobs of the drift-plus-penalty scheduler.
//   penalty_v : utility weight V; larger trades queue backlog for utility
//   eta       : weight of the virtual queues in the drift
//   admit_cap : per-slot cap on admissions and auxiliary targets (A_max)
struct DsaParams
{
    Fairness fairness = Fairness::mmf;
    double penalty_v = 0.0;
    double eta = 1.0;
    double admit_cap = 0.0;

    void validate() const;
};

// Per-slot admission: threshold rule minimizing
//   sum_k A_k (Q_k - eta Y_k)  over 0 <= A_k <= min(L_k, admit_cap).
// Admits min(L_k, admit_cap) when Q_k <= eta Y_k (ties admit), else 0.
std::vector<double> admit(std::span<const double> reservoir, std::span<const double> transmit,
                          std::span<const double> virtual_q, const DsaParams &par);

// Per-slot auxiliary targets: maximize V f(nu) - eta sum_k Y_k nu_k over
// [0, admit_cap]^K. Closed forms per utility; ties resolve to the smaller
// admission pressure (0) except pf, whose optimum is unique.
std::vector<double> solve_auxiliary(std::span<const double> virtual_q, const DsaParams &par);

// f(x) for the chosen utility; pf returns -inf when any coordinate is 0.
double utility_value(std::span<const double> x, Fairness f);

} // namespace mimoq
