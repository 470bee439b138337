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
#include "fairness.hpp"
#include "queues.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mimoq
{

// Scheduling policy of a run. "dsa" is the drift-plus-penalty scheduler;
// the rest are static power policies that drain the reservoir every slot.
// "modified_*" variants only serve users whose masking backlog is nonzero.
enum class SchedulerKind
{
    dsa,
    mmf,
    modified_mmf,
    pf,
    modified_pf,
    msr,
    modified_msr
};

// What the modified baselines test for "has something to send":
//   reservoir : the data admissible this slot (default)
//   backlog   : reservoir plus the transmission queue
enum class BaselineMask
{
    reservoir,
    backlog
};

struct SchedulerSpec
{
    SchedulerKind kind = SchedulerKind::dsa;
    DsaParams dsa;
    BaselineMask mask = BaselineMask::reservoir;
    double baseline_tol = 1e-7; // pf gradient / cell-free mmf convergence
};

enum class MobilityModel
{
    none,
    random_walk
};

struct MobilitySpec
{
    MobilityModel model = MobilityModel::none;
    double max_step_m = 5.0;
    long period_slots = 100;
};

struct SimConfig
{
    ScenarioConfig scenario;
    Traffic traffic;
    SchedulerSpec scheduler;
    MobilitySpec mobility;
    long slots = 10000;
    std::uint64_t seed = 1;
    double warmup_fraction = 0.0; // slots excluded from the averages
    int series_points = 500;      // checkpoints of the delay / queue series
    double slot_seconds = 1e-3;   // wall-clock length of a slot
    bool check_drift = true;      // per-slot drift-bound audit

    void validate() const;
};

struct UserMetrics
{
    double arrival_rate = 0.0;          // nominal lambda, bits/slot
    double realized_arrival_rate = 0.0; // sampled arrivals, bits/slot
    double admitted_rate = 0.0;         // bits/slot entering the transmit queue
    double throughput = 0.0;            // delivered bits/slot
    double throughput_bcu = 0.0;        // delivered bits per channel use
    double avg_queue = 0.0;             // time-averaged transmit queue, bits
    double delay = 0.0;                 // avg_queue / throughput * slot_seconds, s/bit
    double queue_slope = 0.0;           // ls fit of the queue over the last half, bits/slot
    bool stable = true;
};

// One checkpoint of the time series: running per-bit delay estimate and the
// instantaneous transmit queue, per user.
struct SeriesPoint
{
    long slot = 0;
    std::vector<double> delay;
    std::vector<double> queue;
};

struct Metrics
{
    int num_users = 0;
    long slots = 0;
    long warmup_slots = 0;
    double tau_c = 0.0;
    double slot_seconds = 0.0;
    std::vector<UserMetrics> users;
    std::vector<SeriesPoint> series;
    long drift_checks = 0;
    long drift_violations = 0;
    double solver_rounds_mean = 0.0; // cell-free wsr rounds per slot
    int solver_rounds_max = 0;
};

// Least-squares slope of (t, y) samples restricted to the second half of the
// sampled window; 0 when fewer than two samples remain.
double slope_last_half(std::span<const long> t, std::span<const double> y);

// A user counts as unstable when its transmit queue keeps growing: the
// queue slope over the last half of the run exceeds threshold * lambda
// (lambda = nominal arrival rate; a zero-lambda user is unstable only if
// the slope is positive). Sets users[k].stable on the metrics in place and
// returns the flags.
std::vector<bool> detect_stability(Metrics &m, std::span<const double> lambda, double threshold = 0.05);

// Runs one simulation. The optional trace stream receives one CSV row per
// slot and user with the full decision ledger.
Metrics run_simulation(const SimConfig &cfg, std::ostream *trace = nullptr);

} // namespace mimoq
