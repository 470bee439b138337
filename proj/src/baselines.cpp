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

#include "baselines.hpp"
#include "wsr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mimoq
{

std::vector<char> active_mask(std::span<const double> backlog)
{
    std::vector<char> m(backlog.size(), 0);
    for (std::size_t k = 0; k < backlog.size(); k++)
        m[k] = backlog[k] > 0.0 ? 1 : 0;
    return m;
}

static std::vector<int> active_list(std::span<const char> active, int K, const char *what)
{
    if (static_cast<int>(active.size()) != K)
        throw std::invalid_argument(std::string(what) + ": active mask length mismatch");
    std::vector<int> act;
    for (int k = 0; k < K; k++)
        if (active[k])
            act.push_back(k);
    return act;
}

std::vector<double> mmf_colocated(const LargeScale &ls, std::span<const char> active)
{
    if (ls.cellfree)
        throw std::invalid_argument("mmf_colocated: co-located snapshots only");
    int K = ls.num_users;
    std::vector<int> act = active_list(active, K, "mmf_colocated");
    std::vector<double> p(K, 0.0);
    if (act.empty())
        return p;
    double gmin = ls.gamma[act[0]];
    for (int k : act)
        gmin = std::min(gmin, ls.gamma[k]);
    if (gmin <= 0.0)
        return p; // an unreachable active user forces the common SINR to zero
    for (int k : act)
        p[k] = gmin / ls.gamma[k] * ls.p_max;
    return p;
}

std::vector<double> pf_colocated(const LargeScale &ls, Combiner comb, std::span<const char> active, double tol,
                                 int max_iters)
{
    if (ls.cellfree)
        throw std::invalid_argument("pf_colocated: co-located snapshots only");
    if (!(tol > 0.0) || max_iters < 1)
        throw std::invalid_argument("pf_colocated: need tol > 0 and max_iters >= 1");
    int K = ls.num_users, M = ls.num_antennas;
    std::vector<int> act = active_list(active, K, "pf_colocated");
    std::vector<double> p(K, 0.0);
    if (act.empty())
        return p;

    // sinr_k = num_k q_k / (1 + sum_j den_j q_j) with q = p / p_max
    std::vector<double> num(K, 0.0), den(K, 0.0);
    for (int k = 0; k < K; k++)
    {
        if (comb == Combiner::mrc)
        {
            num[k] = static_cast<double>(M) * ls.gamma[k] * ls.p_max;
            den[k] = ls.beta[k] * ls.p_max;
        }
        else if (comb == Combiner::zf)
        {
            if (M <= K)
                throw std::invalid_argument("pf_colocated: zf requires num_antennas > num_users");
            num[k] = static_cast<double>(M - K) * ls.gamma[k] * ls.p_max;
            den[k] = (ls.beta[k] - ls.gamma[k]) * ls.p_max;
        }
        else
            throw std::invalid_argument("pf_colocated: combiner must be mrc or zf");
    }
    for (int k : act)
        if (num[k] <= 0.0)
            throw std::runtime_error("pf_colocated: an active user has zero channel-estimate gain");

    // ascent in z = ln q; the composite objective is concave in z
    const double z_lo = std::log(1e-12), z_hi = 0.0;
    std::vector<double> z(act.size(), 0.0), g(act.size()), phi(act.size()), zn(act.size());

    auto value_and_phi = [&](const std::vector<double> &zz, std::vector<double> *ph, double *load) -> double {
        double d = 1.0;
        for (std::size_t i = 0; i < act.size(); i++)
            d += den[act[i]] * std::exp(zz[i]);
        double f = 0.0;
        for (std::size_t i = 0; i < act.size(); i++)
        {
            double sinr = num[act[i]] * std::exp(zz[i]) / d;
            double lr = std::log1p(sinr);
            if (lr <= 0.0)
                return -std::numeric_limits<double>::infinity();
            f += std::log(lr);
            if (ph)
                (*ph)[i] = sinr / ((1.0 + sinr) * lr);
        }
        if (load)
            *load = d;
        return f;
    };

    double load = 0.0;
    double f = value_and_phi(z, &phi, &load);
    double step = 1.0;
    int it = 0;
    for (it = 0; it < max_iters; it++)
    {
        double phisum = 0.0;
        for (double v : phi)
            phisum += v;
        double resid = 0.0;
        for (std::size_t i = 0; i < act.size(); i++)
        {
            g[i] = phi[i] - den[act[i]] * std::exp(z[i]) / load * phisum;
            double r; // KKT violation: a bound only blocks ascent pointing inward
            if (z[i] >= z_hi)
                r = std::max(-g[i], 0.0);
            else if (z[i] <= z_lo)
                r = std::max(g[i], 0.0);
            else
                r = std::abs(g[i]);
            resid = std::max(resid, r);
        }
        if (resid <= tol)
            break;

        bool accepted = false;
        for (int half = 0; half < 60; half++)
        {
            for (std::size_t i = 0; i < act.size(); i++)
                zn[i] = std::clamp(z[i] + step * g[i], z_lo, z_hi);
            double fn = value_and_phi(zn, nullptr, nullptr);
            if (fn > f)
            {
                z = zn;
                f = value_and_phi(z, &phi, &load);
                step *= 1.3;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break; // line search stalled at fp resolution: gradient check decides below
    }
    if (it >= max_iters)
        throw std::runtime_error("pf_colocated: no convergence after " + std::to_string(max_iters) +
                                 " iterations (projected gradient above " + std::to_string(tol) + ")");

    for (std::size_t i = 0; i < act.size(); i++)
        p[act[i]] = std::exp(z[i]) * ls.p_max;
    return p;
}

std::vector<double> msr_colocated(const LargeScale &ls, Combiner comb, std::span<const char> active)
{
    int K = ls.num_users;
    std::vector<int> act = active_list(active, K, "msr_colocated");
    std::vector<double> w(K, 0.0);
    for (int k : act)
        w[k] = 1.0;
    return solve_wsr_colocated(ls, w, comb).power;
}

// ----------------------------------------------------------- cell-free max-min

CfMmfSolution mmf_cellfree(const LargeScale &ls, std::span<const char> active, double tol, int max_rounds)
{
    if (!ls.cellfree)
        throw std::invalid_argument("mmf_cellfree: cell-free snapshots only");
    if (!(tol > 0.0) || max_rounds < 1)
        throw std::invalid_argument("mmf_cellfree: need tol > 0 and max_rounds >= 1");
    int M = ls.num_antennas, K = ls.num_users;
    std::vector<int> act0 = active_list(active, K, "mmf_cellfree");

    CfMmfSolution sol;
    sol.power.assign(K, 0.0);
    sol.weights.num_antennas = M;
    sol.weights.num_users = K;
    sol.weights.a.assign(static_cast<std::size_t>(M) * K, 0.0);

    // default decoding columns: normalized estimate profile
    std::vector<int> act;
    for (int k = 0; k < K; k++)
    {
        double norm = 0.0;
        for (int m = 0; m < M; m++)
            norm += ls.gamma_at(m, k) * ls.gamma_at(m, k);
        if (norm > 0.0)
        {
            norm = std::sqrt(norm);
            for (int m = 0; m < M; m++)
                sol.weights.at(m, k) = ls.gamma_at(m, k) / norm;
        }
        if (norm > 0.0 && active[k])
            act.push_back(k);
    }
    if (act.empty())
        return sol;
    std::size_t n = act.size();
    double P = ls.p_max;

    std::vector<double> eta(n, 1.0); // linear power fractions p = P eta
    std::vector<double> w2(M), numc(n), noise(n), G(n * n), etat(n);
    double t_prev = 0.0;

    int round = 0;
    for (round = 1; round <= max_rounds; round++)
    {
        for (int m = 0; m < M; m++)
        {
            double v = 1.0;
            for (std::size_t i = 0; i < n; i++)
                v += P * eta[i] * ls.beta_at(m, act[i]);
            w2[m] = v;
        }
        // decoding-weight step: a_k = diag(gamma_mk w2_m)^{-1} gamma_k, i.e.
        // a_mk = 1/w2_m wherever the user has estimate energy; this maximizes
        // each user's SINR for the current powers
        for (std::size_t i = 0; i < n; i++)
            for (int m = 0; m < M; m++)
                sol.weights.at(m, act[i]) = (ls.gamma_at(m, act[i]) > 0.0) ? 1.0 / w2[m] : 0.0;

        // sinr_i(eta) = numc_i eta_i / (sum_j G_ij eta_j + noise_i)
        for (std::size_t i = 0; i < n; i++)
        {
            int k = act[i];
            double S = 0.0, nz = 0.0;
            for (int m = 0; m < M; m++)
            {
                double a = sol.weights.at(m, k);
                S += a * ls.gamma_at(m, k);
                nz += a * a * ls.gamma_at(m, k);
            }
            numc[i] = P * S * S;
            noise[i] = nz;
            for (std::size_t j = 0; j < n; j++)
            {
                double v = 0.0;
                for (int m = 0; m < M; m++)
                {
                    double a = sol.weights.at(m, k);
                    v += a * a * ls.gamma_at(m, k) * ls.beta_at(m, act[j]);
                }
                G[i * n + j] = P * v;
            }
        }

        auto min_sinr_at = [&](const std::vector<double> &e) -> double {
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; i++)
            {
                double d = noise[i];
                for (std::size_t j = 0; j < n; j++)
                    d += G[i * n + j] * e[j];
                worst = std::min(worst, numc[i] * e[i] / d);
            }
            return worst;
        };

        // feasibility of a common target t: iterate the capped standard
        // interference map from zero; it increases monotonically, so it
        // converges, and t is achievable iff the limit meets the target
        auto feasible = [&](double t, std::vector<double> *out) -> bool {
            std::vector<double> e(n, 0.0), en(n);
            for (int itr = 0; itr < 5000; itr++)
            {
                double change = 0.0;
                for (std::size_t i = 0; i < n; i++)
                {
                    double d = noise[i];
                    for (std::size_t j = 0; j < n; j++)
                        d += G[i * n + j] * e[j];
                    en[i] = std::min(1.0, t * d / numc[i]);
                    change = std::max(change, std::abs(en[i] - e[i]));
                }
                e = en;
                if (change <= 1e-14)
                    break;
            }
            if (min_sinr_at(e) < t * (1.0 - 1e-9))
                return false;
            if (out)
                *out = e;
            return true;
        };

        // bracket: both the previous target and the all-ones point are
        // achievable; nobody can beat their interference-free full-power SINR
        std::vector<double> ones(n, 1.0);
        double t_lo = std::max(t_prev, min_sinr_at(ones));
        double t_hi = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; i++)
            t_hi = std::min(t_hi, numc[i] / noise[i]);

        std::vector<double> e_best;
        if (feasible(t_hi, &e_best))
            t_lo = t_hi; // interference-free corner (disjoint service sets)
        else
        {
            if (!feasible(t_lo, &e_best))
                e_best = ones; // numerically stuck at the bracket edge; keep a witness
            for (int itb = 0; itb < 80 && t_hi - t_lo > 1e-12 * std::max(1.0, t_lo); itb++)
            {
                double mid = 0.5 * (t_lo + t_hi);
                if (feasible(mid, &e_best))
                    t_lo = mid;
                else
                    t_hi = mid;
            }
        }
        eta = e_best;
        sol.min_sinr_trace.push_back(t_lo);
        bool done = std::abs(t_lo - t_prev) <= tol * std::max(1.0, t_lo);
        t_prev = t_lo;
        if (done)
            break;
    }

    sol.iterations = std::min(round, max_rounds);
    sol.min_sinr = t_prev;
    for (std::size_t i = 0; i < n; i++)
        sol.power[act[i]] = P * eta[i];
    return sol;
}

} // namespace mimoq
