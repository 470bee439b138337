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
#include <string>
#include <vector>

namespace mimoq
{

// Deployment: one central M-antenna base station, or M single-antenna access
// points spread over the area with centralized large-scale combining.
enum class Mode
{
    colocated,
    cellfree
};

// Receive combiner. "lsfd" is the two-layer scheme of the cell-free mode
// (per-AP matched filtering plus large-scale fading decoding weights) and is
// only valid there; mrc/zf are only valid for the co-located mode.
enum class Combiner
{
    mrc,
    zf,
    lsfd
};

struct Point
{
    double x = 0.0;
    double y = 0.0;
};

// Three-slope pathloss used by the cell-free mode. Below d0 the gain is
// constant, between d0 and d1 it decays with mid_exponent, beyond d1 with
// far_exponent. The far slope is anchored so that a link of length
// ref_distance_m has the same gain as the single-slope model with
// ref_exponent; this keeps the two deployment modes on one transmit-power
// scale (same cell-edge SNR for the same p_max).
struct ThreeSlope
{
    double d0_m = 10.0;
    double d1_m = 50.0;
    double mid_exponent = 2.0;
    double far_exponent = 3.5;
    double ref_distance_m = 500.0;
    double ref_exponent = 3.76;
};

// Static description of a deployment. All gains are normalized by the noise
// power, so "power" throughout the library means transmit SNR.
struct ScenarioConfig
{
    Mode mode = Mode::colocated;
    Combiner combiner = Combiner::mrc;

    int num_antennas = 100; // M (co-located antennas, or access points)
    int num_users = 10;     // K
    double tau_c = 100.0;   // symbols per coherence block

    // Power budget per user. 0 means "derive from the edge SNR": p_max is set
    // so that an unshadowed user at edge_distance_m sees edge_snr_db.
    double p_max = 0.0;
    double edge_snr_db = 5.0;
    double edge_distance_m = 500.0;

    double area_side_m = 1000.0;
    double pathloss_exponent = 3.76; // co-located single-slope exponent
    double shadowing_std_db = 8.0;
    double min_distance_m = 1.0; // clamp for the pathloss singularity at d=0
    ThreeSlope cf;               // cell-free pathloss constants

    // Nonempty: skip geometry and pin the large-scale gains directly via
    // beta_k = 10^(snr/10) / p_max (one entry per user). Mobility is then
    // unavailable. Co-located mode only.
    std::vector<double> fixed_snr_db;

    // false: pilot length stays K for the whole run. true: it tracks the
    // number of users with data each slot (gains get recomputed per slot).
    bool tau_p_dynamic = false;

    void validate() const; // throws std::invalid_argument
};

// A realized deployment: positions, shadowing draws and the resulting
// large-scale gains. beta is the authoritative gain storage; mobility
// updates positions, redraws shadowing for moved users and recomputes beta.
struct Scenario
{
    ScenarioConfig cfg;
    bool fixed_beta = false;     // gains pinned by cfg.fixed_snr_db
    std::vector<Point> ap_pos;   // 1 entry (co-located) or M entries
    std::vector<Point> user_pos; // K entries
    std::vector<double> shadow_db; // per-link log-normal draws, same shape as beta
    std::vector<double> beta;    // K (co-located) or M*K row-major [m*K + k]

    double beta_at(int m, int k) const { return beta[static_cast<std::size_t>(m) * cfg.num_users + k]; }
};

// Large-scale snapshot consumed by the rate expressions and solvers: the
// channel gains beta, the channel-estimate quality gamma for a given pilot
// length, and the bookkeeping needed to turn SINR into bits per slot.
struct LargeScale
{
    bool cellfree = false;
    int num_antennas = 1; // M
    int num_users = 1;    // K
    double tau_c = 100.0;
    double tau_p = 1.0;
    double p_max = 0.0;
    std::vector<double> beta;  // K or M*K row-major
    std::vector<double> gamma; // same shape as beta

    double beta_at(int m, int k) const { return beta[static_cast<std::size_t>(m) * num_users + k]; }
    double gamma_at(int m, int k) const { return gamma[static_cast<std::size_t>(m) * num_users + k]; }
    double symbols_for_data() const { return tau_c - tau_p; }
};

// Large-scale fading decoding weights of the cell-free mode, one column of M
// weights per user. The per-user SINR is invariant to scaling a column.
struct LsfdWeights
{
    int num_antennas = 0;
    int num_users = 0;
    std::vector<double> a; // M*K row-major [m*K + k]

    double at(int m, int k) const { return a[static_cast<std::size_t>(m) * num_users + k]; }
    double &at(int m, int k) { return a[static_cast<std::size_t>(m) * num_users + k]; }
};

// Channel-estimate quality for a gain beta after MMSE estimation from pilots
// of length tau_p at pilot power p_pilot. Always < beta for finite inputs.
double gamma_from_beta(double beta, double tau_p, double p_pilot);

// Samples a deployment: uniform user drops (and AP drops in cell-free mode),
// log-normal shadowing, pathloss. Deterministic in (cfg, seed).
Scenario generate_scenario(const ScenarioConfig &cfg, std::uint64_t seed);

// Derives the gamma snapshot for a pilot length. Pilot power is p_max.
LargeScale large_scale(const Scenario &sc, double tau_p);

// Moves every user one random-walk step: uniform direction, uniform step
// length in [0, max_step_m], resampled until the destination lies inside the
// area. Shadowing is redrawn for moved users and beta recomputed. A zero
// max_step_m leaves the scenario untouched.
void apply_random_walk(Scenario &sc, double max_step_m, std::mt19937_64 &engine);

// Achievable per-user rates (bits per slot) of the co-located uplink under
// mrc or zf combining, for a power vector within [0, p_max].
std::vector<double> rate_colocated(const LargeScale &ls, std::span<const double> power, Combiner comb);

// Per-user SINR / rates of the cell-free uplink for given decoding weights.
std::vector<double> sinr_cellfree(const LargeScale &ls, std::span<const double> power, const LsfdWeights &w);
std::vector<double> rate_cellfree(const LargeScale &ls, std::span<const double> power, const LsfdWeights &w);

// Plain-text snapshot of a realized deployment (round-trips exactly).
std::string scenario_to_table(const Scenario &sc);
Scenario scenario_from_table(const std::string &text);

} // namespace mimoq
