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

#include "sim.hpp"
#include "baselines.hpp"
#include "rng.hpp"
#include "wsr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace mimoq
{

void SimConfig::validate() const
{
    scenario.validate();
    traffic.validate();
    if (static_cast<int>(traffic.arrival_prob.size()) != scenario.num_users)
        throw std::invalid_argument("sim: arrival_prob needs one entry per user");
    if (slots < 1)
        throw std::invalid_argument("sim: slots must be >= 1");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
        throw std::invalid_argument("sim: warmup_fraction must lie in [0,1)");
    if (series_points < 1)
        throw std::invalid_argument("sim: series_points must be >= 1");
    if (!(slot_seconds > 0.0))
        throw std::invalid_argument("sim: slot_seconds must be positive");
    if (scheduler.kind == SchedulerKind::dsa)
        scheduler.dsa.validate();
    if (!(scheduler.baseline_tol > 0.0))
        throw std::invalid_argument("sim: baseline_tol must be positive");
    if (scenario.mode == Mode::cellfree && scheduler.kind != SchedulerKind::dsa &&
        scheduler.kind != SchedulerKind::mmf && scheduler.kind != SchedulerKind::modified_mmf)
        throw std::invalid_argument("sim: cell-free mode supports the dsa, mmf and modified_mmf schedulers");
    if (mobility.model == MobilityModel::random_walk)
    {
        if (mobility.max_step_m < 0.0 || mobility.period_slots < 1)
            throw std::invalid_argument("sim: mobility needs max_step_m >= 0 and period_slots >= 1");
        if (!scenario.fixed_snr_db.empty())
            throw std::invalid_argument("sim: mobility requires position-derived gains, not fixed_snr_db");
    }
}

double slope_last_half(std::span<const long> t, std::span<const double> y)
{
    if (t.size() != y.size())
        throw std::invalid_argument("slope_last_half: length mismatch");
    if (t.empty())
        return 0.0;
    long cut = t.back() / 2;
    double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); i++)
        if (t[i] >= cut)
        {
            double x = static_cast<double>(t[i]);
            n += 1.0;
            st += x;
            sy += y[i];
            stt += x * x;
            sty += x * y[i];
        }
    double det = n * stt - st * st;
    if (n < 2.0 || det <= 0.0)
        return 0.0;
    return (n * sty - st * sy) / det;
}

std::vector<bool> detect_stability(Metrics &m, std::span<const double> lambda, double threshold)
{
    if (static_cast<int>(lambda.size()) != m.num_users)
        throw std::invalid_argument("detect_stability: lambda length mismatch");
    std::vector<bool> stable(m.num_users, true);
    for (int k = 0; k < m.num_users; k++)
    {
        double lim = threshold * lambda[k];
        if (lambda[k] <= 0.0)
            lim = 1e-9; // an unloaded queue only counts as unstable if it truly grows
        stable[k] = m.users[k].queue_slope <= lim;
        m.users[k].stable = stable[k];
    }
    return stable;
}

// ------------------------------------------------------------------ run loop

namespace
{

struct BaselinePowers
{
    std::vector<double> power;
    LsfdWeights weights; // cell-free only
};

// hashable key of a baseline decision: served set plus pilot length
std::uint64_t mask_key(const std::vector<char> &mask, int tau_p)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : mask)
    {
        h ^= static_cast<std::uint64_t>(c) + 0x9e37ULL;
        h *= 1099511628211ULL;
    }
    h ^= static_cast<std::uint64_t>(tau_p);
    h *= 1099511628211ULL;
    return h;
}

} // namespace

Metrics run_simulation(const SimConfig &cfg, std::ostream *trace)
{
    cfg.validate();
    const int K = cfg.scenario.num_users;
    const bool cellfree = cfg.scenario.mode == Mode::cellfree;
    const bool is_dsa = cfg.scheduler.kind == SchedulerKind::dsa;
    const bool modified = cfg.scheduler.kind == SchedulerKind::modified_mmf ||
                          cfg.scheduler.kind == SchedulerKind::modified_pf ||
                          cfg.scheduler.kind == SchedulerKind::modified_msr;
    const Combiner comb = cfg.scenario.combiner;

    Scenario sc = generate_scenario(cfg.scenario, cfg.seed);
    const double tau_p_full = static_cast<double>(K);
    LargeScale ls = large_scale(sc, tau_p_full);

    // ceiling on any realizable per-user rate, for the drift-bound audit;
    // under the dynamic pilot policy the pilot length varies, so take the
    // per-user max over all lengths the run can use
    auto compute_rmax = [&]() -> std::vector<double> {
        if (!cfg.scenario.tau_p_dynamic)
            return rmax_per_user(ls, comb);
        std::vector<double> r(K, 0.0);
        for (int tp = 1; tp <= K; tp++)
        {
            std::vector<double> rr = rmax_per_user(large_scale(sc, static_cast<double>(tp)), comb);
            for (int k = 0; k < K; k++)
                r[k] = std::max(r[k], rr[k]);
        }
        return r;
    };
    std::vector<double> rmax = compute_rmax();

    std::vector<std::mt19937_64> traffic_eng;
    traffic_eng.reserve(K);
    for (int k = 0; k < K; k++)
        traffic_eng.push_back(make_engine(cfg.seed, stream::traffic_base + static_cast<std::uint64_t>(k)));
    std::mt19937_64 mob_eng = make_engine(cfg.seed, stream::mobility);

    QueueState q = make_queue_state(K);

    Metrics m;
    m.num_users = K;
    m.slots = cfg.slots;
    m.warmup_slots = static_cast<long>(std::floor(cfg.warmup_fraction * static_cast<double>(cfg.slots)));
    m.tau_c = cfg.scenario.tau_c;
    m.slot_seconds = cfg.slot_seconds;
    m.users.assign(K, UserMetrics{});

    std::vector<double> cum_arr(K, 0.0), cum_adm(K, 0.0), cum_del(K, 0.0), cum_q(K, 0.0);
    std::vector<double> ser_del(K, 0.0), ser_q(K, 0.0); // full-run running sums for the series
    long stride = std::max(1L, cfg.slots / cfg.series_points);

    std::unordered_map<std::uint64_t, BaselinePowers> cache;
    WsrSolution prev_cf;
    bool have_prev = false;
    long solver_calls = 0;
    double rounds_sum = 0.0;

    if (trace)
        *trace << "slot,user,arrival,admitted,aux,rate,power,queue,virtual,reservoir,delivered\n";

    std::vector<double> aux(K, 0.0), admitted(K, 0.0), rate(K, 0.0), power(K, 0.0), delivered(K, 0.0);
    for (long t = 0; t < cfg.slots; t++)
    {
        if (cfg.mobility.model == MobilityModel::random_walk && t > 0 && t % cfg.mobility.period_slots == 0)
        {
            apply_random_walk(sc, cfg.mobility.max_step_m, mob_eng);
            ls = large_scale(sc, tau_p_full);
            rmax = compute_rmax();
            cache.clear();
        }

        std::vector<double> arrivals = generate_arrivals(cfg.traffic, traffic_eng);
        std::fill(aux.begin(), aux.end(), 0.0);
        std::fill(rate.begin(), rate.end(), 0.0);
        std::fill(power.begin(), power.end(), 0.0);

        if (is_dsa)
        {
            aux = solve_auxiliary(q.virtual_q, cfg.scheduler.dsa);
            admitted = admit(q.reservoir, q.transmit, q.virtual_q, cfg.scheduler.dsa);

            int backlogged = 0;
            for (int k = 0; k < K; k++)
                if (q.transmit[k] > 0.0)
                    backlogged++;
            if (backlogged > 0)
            {
                LargeScale ls_slot;
                const LargeScale *lsp = &ls;
                if (cfg.scenario.tau_p_dynamic)
                {
                    ls_slot = large_scale(sc, static_cast<double>(std::max(1, backlogged)));
                    lsp = &ls_slot;
                }
                if (!cellfree)
                {
                    WsrSolution sol = solve_wsr_colocated(*lsp, q.transmit, comb);
                    power = sol.power;
                    rate = rate_colocated(*lsp, power, comb);
                }
                else
                {
                    WsrSolution sol = solve_wsr_cellfree(*lsp, q.transmit, 200, 1e-6, have_prev ? &prev_cf : nullptr);
                    power = sol.power;
                    rate = rate_cellfree(*lsp, power, sol.weights);
                    rounds_sum += sol.diag.iterations;
                    m.solver_rounds_max = std::max(m.solver_rounds_max, sol.diag.iterations);
                    solver_calls++;
                    prev_cf = std::move(sol);
                    have_prev = true;
                }
            }
        }
        else
        {
            // static policies drain the reservoir in full each slot
            admitted = q.reservoir;

            std::vector<char> mask(K, 1);
            if (modified)
            {
                std::vector<double> basis = q.reservoir;
                if (cfg.scheduler.mask == BaselineMask::backlog)
                    for (int k = 0; k < K; k++)
                        basis[k] += q.transmit[k];
                mask = active_mask(basis);
            }
            int served = 0;
            for (char c : mask)
                served += c;
            if (served > 0)
            {
                int tau_p = cfg.scenario.tau_p_dynamic ? std::max(1, served) : K;
                LargeScale ls_slot;
                const LargeScale *lsp = &ls;
                if (cfg.scenario.tau_p_dynamic)
                {
                    ls_slot = large_scale(sc, static_cast<double>(tau_p));
                    lsp = &ls_slot;
                }
                std::uint64_t key = mask_key(mask, tau_p);
                auto it = cache.find(key);
                if (it == cache.end())
                {
                    BaselinePowers bp;
                    switch (cfg.scheduler.kind)
                    {
                    case SchedulerKind::mmf:
                    case SchedulerKind::modified_mmf:
                        if (cellfree)
                        {
                            CfMmfSolution s = mmf_cellfree(*lsp, mask, cfg.scheduler.baseline_tol);
                            bp.power = std::move(s.power);
                            bp.weights = std::move(s.weights);
                        }
                        else
                            bp.power = mmf_colocated(*lsp, mask);
                        break;
                    case SchedulerKind::pf:
                    case SchedulerKind::modified_pf:
                        bp.power = pf_colocated(*lsp, comb, mask, cfg.scheduler.baseline_tol);
                        break;
                    case SchedulerKind::msr:
                    case SchedulerKind::modified_msr:
                        bp.power = msr_colocated(*lsp, comb, mask);
                        break;
                    default:
                        throw std::runtime_error("run_simulation: unexpected scheduler");
                    }
                    it = cache.emplace(key, std::move(bp)).first;
                }
                power = it->second.power;
                rate = cellfree ? rate_cellfree(*lsp, power, it->second.weights) : rate_colocated(*lsp, power, comb);
            }
        }

        for (int k = 0; k < K; k++)
            delivered[k] = std::min(q.transmit[k], rate[k]);

        QueueState next = step_queues(q, admitted, rate, aux, arrivals);

        if (cfg.check_drift)
        {
            // the bound is algebraic, so it must hold for the heuristics as
            // well once the cap covers their (uncapped) admissions
            double cap_eff = is_dsa ? cfg.scheduler.dsa.admit_cap : 0.0;
            if (!is_dsa)
                for (int k = 0; k < K; k++)
                    cap_eff = std::max(cap_eff, admitted[k]);
            double eta_eff = is_dsa ? cfg.scheduler.dsa.eta : 1.0;
            m.drift_checks++;
            if (!check_drift_bound(q, next, admitted, rate, aux, eta_eff, cap_eff, rmax))
                m.drift_violations++;
        }

        if (t >= m.warmup_slots)
            for (int k = 0; k < K; k++)
            {
                cum_arr[k] += arrivals[k];
                cum_adm[k] += admitted[k];
                cum_del[k] += delivered[k];
                cum_q[k] += q.transmit[k];
            }
        for (int k = 0; k < K; k++)
        {
            ser_del[k] += delivered[k];
            ser_q[k] += q.transmit[k];
        }
        if ((t + 1) % stride == 0 || t + 1 == cfg.slots)
        {
            SeriesPoint sp;
            sp.slot = t + 1;
            sp.delay.resize(K);
            sp.queue.resize(K);
            for (int k = 0; k < K; k++)
            {
                sp.delay[k] = ser_del[k] > 0.0
                                  ? ser_q[k] / ser_del[k] * cfg.slot_seconds
                                  : (ser_q[k] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
                sp.queue[k] = next.transmit[k];
            }
            m.series.push_back(std::move(sp));
        }

        if (trace)
        {
            char row[256];
            for (int k = 0; k < K; k++)
            {
                std::snprintf(row, sizeof(row), "%ld,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", t,
                              k, arrivals[k], admitted[k], aux[k], rate[k], power[k], q.transmit[k], q.virtual_q[k],
                              q.reservoir[k], delivered[k]);
                *trace << row;
            }
        }

        q = std::move(next);
    }

    double denom = static_cast<double>(cfg.slots - m.warmup_slots);
    std::vector<long> ser_t(m.series.size());
    std::vector<double> ser_y(m.series.size());
    for (std::size_t i = 0; i < m.series.size(); i++)
        ser_t[i] = m.series[i].slot;

    std::vector<double> lambda(K, 0.0);
    for (int k = 0; k < K; k++)
    {
        UserMetrics &u = m.users[k];
        lambda[k] = cfg.traffic.arrival_prob[k] * cfg.traffic.packet_bits;
        u.arrival_rate = lambda[k];
        u.realized_arrival_rate = cum_arr[k] / denom;
        u.admitted_rate = cum_adm[k] / denom;
        u.throughput = cum_del[k] / denom;
        u.throughput_bcu = u.throughput / cfg.scenario.tau_c;
        u.avg_queue = cum_q[k] / denom;
        u.delay = u.throughput > 0.0
                      ? u.avg_queue / u.throughput * cfg.slot_seconds
                      : (u.avg_queue > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        for (std::size_t i = 0; i < m.series.size(); i++)
            ser_y[i] = m.series[i].queue[k];
        u.queue_slope = slope_last_half(ser_t, ser_y);
    }
    if (solver_calls > 0)
        m.solver_rounds_mean = rounds_sum / static_cast<double>(solver_calls);
    detect_stability(m, lambda);
    return m;
}

} // namespace mimoq
