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

#include "wsr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mimoq
{

// ------------------------------------------------------------- transformed form

TransformedProblem wsr_transform(const LargeScale &ls, Combiner comb)
{
    if (ls.cellfree)
        throw std::invalid_argument("wsr_transform: co-located snapshots only");
    int K = ls.num_users, M = ls.num_antennas;
    TransformedProblem tp;
    tp.p_max = ls.p_max;
    tp.gain.assign(K, 0.0);
    tp.slope.assign(K, 0.0);
    if (comb == Combiner::mrc)
    {
        for (int k = 0; k < K; k++)
            if (ls.beta[k] > 0.0)
            {
                tp.gain[k] = static_cast<double>(M) * ls.gamma[k] / ls.beta[k];
                tp.slope[k] = ls.beta[k];
            }
    }
    else if (comb == Combiner::zf)
    {
        if (M <= K)
            throw std::invalid_argument("wsr_transform: zf requires num_antennas > num_users");
        for (int k = 0; k < K; k++)
        {
            double resid = ls.beta[k] - ls.gamma[k]; // estimation residual, > 0 for beta > 0
            if (ls.beta[k] > 0.0 && resid > 0.0)
            {
                tp.gain[k] = static_cast<double>(M - K) * ls.gamma[k] / resid;
                tp.slope[k] = resid;
            }
        }
    }
    else
        throw std::invalid_argument("wsr_transform: combiner must be mrc or zf");
    return tp;
}

// ------------------------------------------------------------- inner water-fill

// sum over the would-be allocation at a given multiplier
static double waterfill_sum(std::span<const double> weights, std::span<const double> gain,
                            std::span<const double> caps, const std::vector<int> &act, double lam)
{
    double s = 0.0;
    for (int k : act)
        s += std::clamp(weights[k] / lam - 1.0 / gain[k], 0.0, caps[k]);
    return s;
}

InnerSolution wsr_inner_allocate(std::span<const double> weights, std::span<const double> gain,
                                 std::span<const double> caps, double budget)
{
    std::size_t K = weights.size();
    if (gain.size() != K || caps.size() != K)
        throw std::invalid_argument("wsr_inner_allocate: vector length mismatch");
    if (!(budget >= 0.0))
        throw std::invalid_argument("wsr_inner_allocate: budget must be nonnegative");

    InnerSolution out;
    out.x.assign(K, 0.0);

    std::vector<int> act;
    double capsum = 0.0, lam_hi = 0.0;
    for (std::size_t k = 0; k < K; k++)
    {
        if (weights[k] < 0.0 || gain[k] < 0.0 || caps[k] < 0.0)
            throw std::invalid_argument("wsr_inner_allocate: negative input");
        if (weights[k] > 0.0 && gain[k] > 0.0 && caps[k] > 0.0)
        {
            act.push_back(static_cast<int>(k));
            capsum += caps[k];
            lam_hi = std::max(lam_hi, weights[k] * gain[k]);
        }
    }
    if (budget == 0.0 || act.empty())
    {
        if (budget > 1e-12 * std::max(1.0, capsum))
            throw std::invalid_argument("wsr_inner_allocate: positive budget but nothing can absorb it");
        out.multiplier = lam_hi;
        return out;
    }
    if (budget > capsum * (1.0 + 1e-9))
        throw std::invalid_argument("wsr_inner_allocate: budget exceeds the sum of caps");

    if (budget >= capsum * (1.0 - 1e-12))
    {
        // saturated corner: everything at its cap (up to fp slop in the budget)
        double f = budget / capsum;
        for (int k : act)
            out.x[k] = std::min(caps[k] * f, caps[k]);
        double lam = lam_hi;
        for (int k : act)
            lam = std::min(lam, weights[k] * gain[k] / (1.0 + gain[k] * out.x[k]));
        out.multiplier = lam;
    }
    else
    {
        // the allocation sum is decreasing in lambda: bisect
        double lo = 0.0, hi = lam_hi;
        for (int it = 0; it < 80; it++)
        {
            double mid = 0.5 * (lo + hi);
            if (mid <= 0.0)
                break;
            (waterfill_sum(weights, gain, caps, act, mid) >= budget ? lo : hi) = mid;
        }
        double lam = 0.5 * (lo + hi);

        // exact multiplier for the breakpoint pattern found by the bisection:
        // interior coords satisfy x = w/lam - 1/g, so lam solves the linear
        // budget identity for that pattern
        std::vector<int> interior, capped;
        for (int k : act)
        {
            double x = weights[k] / lam - 1.0 / gain[k];
            if (x >= caps[k])
                capped.push_back(k);
            else if (x > 0.0)
                interior.push_back(k);
        }
        double fixed = 0.0;
        for (int k : capped)
            fixed += caps[k];
        if (!interior.empty())
        {
            double wsum = 0.0, gsum = 0.0;
            for (int k : interior)
            {
                wsum += weights[k];
                gsum += 1.0 / gain[k];
            }
            double lam_exact = wsum / (budget - fixed + gsum);
            if (std::isfinite(lam_exact) && lam_exact > 0.0)
            {
                bool ok = true;
                for (int k : interior)
                {
                    double x = weights[k] / lam_exact - 1.0 / gain[k];
                    if (!(x >= -1e-12 * caps[k] && x <= caps[k] * (1.0 + 1e-12)))
                        ok = false;
                }
                for (int k : capped)
                    if (weights[k] / lam_exact - 1.0 / gain[k] < caps[k] * (1.0 - 1e-9))
                        ok = false;
                if (ok)
                    lam = lam_exact;
            }
        }
        for (int k : act)
            out.x[k] = std::clamp(weights[k] / lam - 1.0 / gain[k], 0.0, caps[k]);

        // absorb the fp residual of the budget into an interior coordinate
        double used = 0.0;
        for (int k : act)
            used += out.x[k];
        double resid = budget - used;
        for (int k : interior)
            if (out.x[k] + resid >= 0.0 && out.x[k] + resid <= caps[k])
            {
                out.x[k] += resid;
                break;
            }
        out.multiplier = lam;
    }

    // stationarity report and objective value; the boundary classification
    // is tolerant so a cap reached up to rounding counts as capped
    double lam = out.multiplier, res = 0.0, val = 0.0;
    for (int k : act)
    {
        double marg = weights[k] * gain[k] / (1.0 + gain[k] * out.x[k]);
        if (out.x[k] <= 1e-12 * caps[k])
            res = std::max(res, (marg - lam) / std::max(lam, 1e-300));
        else if (out.x[k] >= caps[k] * (1.0 - 1e-9))
            res = std::max(res, (lam - marg) / std::max(lam, 1e-300));
        else
            res = std::max(res, std::abs(marg - lam) / std::max(lam, 1e-300));
        val += weights[k] * std::log1p(gain[k] * out.x[k]);
    }
    out.kkt_residual = std::max(res, 0.0);
    out.value = val;
    return out;
}

// ---------------------------------------------------------- co-located solver

static void check_weights(std::span<const double> weights, int K, const char *what)
{
    if (static_cast<int>(weights.size()) != K)
        throw std::invalid_argument(std::string(what) + ": weight vector length mismatch");
    for (double w : weights)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument(std::string(what) + ": weights must be finite and nonnegative");
}

WsrSolution solve_wsr_colocated(const LargeScale &ls, std::span<const double> weights, Combiner comb)
{
    if (ls.cellfree)
        throw std::invalid_argument("solve_wsr_colocated: co-located snapshots only");
    int K = ls.num_users;
    check_weights(weights, K, "solve_wsr_colocated");
    if (ls.p_max <= 0.0)
        throw std::invalid_argument("solve_wsr_colocated: p_max must be positive");

    WsrSolution sol;
    sol.power.assign(K, 0.0);
    TransformedProblem tp = wsr_transform(ls, comb);

    std::vector<int> act;
    double bsum = 0.0;
    for (int k = 0; k < K; k++)
        if (weights[k] > 0.0 && tp.gain[k] > 0.0 && tp.slope[k] > 0.0)
        {
            act.push_back(k);
            bsum += tp.slope[k];
        }
    if (act.empty())
    {
        sol.diag.s = 1.0;
        return sol;
    }

    // Only positively weighted users transmit at an optimum (anyone else only
    // adds interference), so the reachable interference scale is
    // s in [1/(1 + p_max sum_act b), 1]. The search runs in log(s): the
    // objective stays unimodal under the monotone reparameterization and tiny
    // scales keep full relative resolution.
    double s_lo = 1.0 / (1.0 + tp.p_max * bsum);
    double t_lo = std::log(s_lo), t_hi = 0.0;

    int evals = 0;
    auto eval = [&](double t) -> std::pair<double, InnerSolution> {
        double s = std::exp(t);
        std::vector<double> caps(K, 0.0);
        for (int k : act)
            caps[k] = tp.slope[k] * tp.p_max * s;
        InnerSolution in = wsr_inner_allocate(weights, tp.gain, caps, std::max(1.0 - s, 0.0));
        evals++;
        return {in.value, std::move(in)};
    };

    double best_t = t_hi;
    auto [best_v, best_in] = eval(t_hi); // zero-power corner, value 0
    auto consider = [&](double t, std::pair<double, InnerSolution> r) {
        if (r.first > best_v)
        {
            best_v = r.first;
            best_t = t;
            best_in = std::move(r.second);
        }
    };
    consider(t_lo, eval(t_lo)); // full-power corner

    constexpr double invphi = 0.6180339887498949;
    double a = t_lo, b = t_hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    auto rc = eval(c), rd = eval(d);
    for (int it = 0; it < 72; it++)
    {
        if (rc.first >= rd.first)
        {
            consider(c, rc);
            b = d;
            d = c;
            rd = std::move(rc);
            c = b - invphi * (b - a);
            rc = eval(c);
        }
        else
        {
            consider(d, rd);
            a = c;
            c = d;
            rc = std::move(rd);
            d = a + invphi * (b - a);
            rd = eval(d);
        }
    }
    consider(c, std::move(rc));
    consider(d, std::move(rd));

    double s = std::exp(best_t);
    for (int k : act)
    {
        double p = best_in.x[k] / (tp.slope[k] * s);
        sol.power[k] = std::clamp(p, 0.0, tp.p_max);
    }
    sol.diag.s = s;
    sol.diag.iterations = evals;
    sol.diag.kkt_residual = best_in.kkt_residual;
    std::vector<double> r = rate_colocated(ls, sol.power, comb);
    for (int k = 0; k < K; k++)
        sol.diag.objective += weights[k] * r[k];
    return sol;
}

// ------------------------------------------------------------ cell-free solver

WsrSolution solve_wsr_cellfree(const LargeScale &ls, std::span<const double> weights, int max_rounds, double tol,
                               const WsrSolution *warm)
{
    if (!ls.cellfree)
        throw std::invalid_argument("solve_wsr_cellfree: cell-free snapshots only");
    int M = ls.num_antennas, K = ls.num_users;
    check_weights(weights, K, "solve_wsr_cellfree");
    if (max_rounds < 1 || !(tol > 0.0))
        throw std::invalid_argument("solve_wsr_cellfree: need max_rounds >= 1 and tol > 0");
    double P = ls.p_max, sqrtP = std::sqrt(P);
    if (P <= 0.0)
        throw std::invalid_argument("solve_wsr_cellfree: p_max must be positive");

    WsrSolution sol;
    sol.power.assign(K, 0.0);
    sol.weights.num_antennas = M;
    sol.weights.num_users = K;
    sol.weights.a.assign(static_cast<std::size_t>(M) * K, 0.0);

    // users without weight or without any channel-estimate energy sit out
    // with zero power; their decoding column defaults to the normalized
    // estimate profile so downstream rate evaluations stay well defined
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
            if (weights[k] > 0.0)
                act.push_back(k);
        }
    }
    if (act.empty())
        return sol;

    std::vector<double> eta(K, 0.0);
    for (int k : act)
        eta[k] = 1.0;
    bool warm_ok = warm && static_cast<int>(warm->power.size()) == K && warm->weights.num_antennas == M &&
                   warm->weights.num_users == K;
    if (warm_ok)
        for (int k : act)
        {
            // keep a revival floor: a coefficient pinned at zero could never
            // recover (every later update is proportional to the current one)
            eta[k] = std::clamp(std::sqrt(std::max(warm->power[k], 0.0) / P), 1e-2, 1.0);
            double norm = 0.0;
            for (int m = 0; m < M; m++)
                norm += warm->weights.at(m, k) * warm->weights.at(m, k);
            if (norm > 0.0)
                for (int m = 0; m < M; m++)
                    sol.weights.at(m, k) = warm->weights.at(m, k);
        }

    // True objective of a coefficient vector: the decoding weights are an
    // inner maximization of a generalized Rayleigh quotient whose optimum
    // points along 1 / load_m on the support of the estimate profile, under
    // which the effective gain collapses to sum_m gamma_mk / load_m. The
    // weight block runs first in every round, so this evaluation coincides
    // with the surrogate at its touch point and is nondecreasing over rounds.
    double pre = ls.symbols_for_data();
    std::vector<double> load(M);
    auto objective = [&](const std::vector<double> &e) -> double {
        for (int m = 0; m < M; m++)
        {
            double v = 1.0;
            for (int i : act)
                v += P * e[i] * e[i] * ls.beta_at(m, i);
            load[m] = v;
        }
        double o = 0.0;
        for (int k : act)
        {
            double s = 0.0;
            for (int m = 0; m < M; m++)
                s += ls.gamma_at(m, k) / load[m];
            o += weights[k] * pre * std::log2(1.0 + P * e[k] * e[k] * s);
        }
        return o;
    };

    std::vector<double> w2(M), sum_a_gamma(K, 0.0), u(K, 0.0), wbar(K, 0.0), h(M);
    double obj = objective(eta), delta = 0.0;

    // The block iteration closes in on boundary points and slow interior
    // modes only geometrically, so coefficient trails from two consecutive
    // plain rounds are extended by their geometric-series limit; the jump is
    // kept only when it strictly improves the objective above, which
    // preserves monotonicity of the reported value.
    std::vector<double> e1(K, 0.0), e2(K, 0.0), cand(K, 0.0);
    int plain_rounds = 0;
    constexpr double drop_floor = 1e-10; // a coefficient this small cannot recover
    constexpr double zero_jump = 1e-4;   // only near-dead coefficients may be extrapolated to zero

    int n = 0;
    for (n = 1; n <= max_rounds; n++)
    {
        // per-antenna load under the current coefficients
        for (int m = 0; m < M; m++)
        {
            double v = 1.0;
            for (int i : act)
                v += P * eta[i] * eta[i] * ls.beta_at(m, i);
            w2[m] = v;
        }
        // decoding weights first: the optimal direction is 1 / load on the
        // support of the estimate profile, and the overall scale is immaterial
        // because the receive filter and mse weight below re-optimize against
        // it. Refreshing the weights before the filter step keeps the reported
        // objective equal to the surrogate at its touch point, hence monotone.
        for (int k : act)
        {
            double t = 0.0;
            for (int m = 0; m < M; m++)
                if (ls.gamma_at(m, k) > 0.0)
                    t += ls.gamma_at(m, k) / w2[m];
            for (int m = 0; m < M; m++)
                sol.weights.at(m, k) = (ls.gamma_at(m, k) > 0.0) ? 1.0 / w2[m] : 0.0;
            sum_a_gamma[k] = t;
        }
        // receive filter scalar u and the mse weight
        for (int k : act)
        {
            double S = sum_a_gamma[k], T = 0.0;
            for (int m = 0; m < M; m++)
            {
                double a = sol.weights.at(m, k);
                T += a * a * ls.gamma_at(m, k) * w2[m];
            }
            double dk = P * eta[k] * eta[k] * S * S + T;
            if (!(dk > 0.0))
                throw std::runtime_error("solve_wsr_cellfree: degenerate received power");
            u[k] = sqrtP * eta[k] * S / dk;
            double e = u[k] * u[k] * dk - 2.0 * sqrtP * eta[k] * u[k] * S + 1.0;
            e = std::max(e, 1e-12); // mse floor against pathological conditioning
            wbar[k] = weights[k] / e;
        }
        // power coefficients: the weighted mse is a separable positive
        // quadratic in eta, so the box-clamped stationary point is the exact
        // block minimizer
        for (int m = 0; m < M; m++)
        {
            double v = 0.0;
            for (int i : act)
            {
                double a = sol.weights.at(m, i);
                v += wbar[i] * u[i] * u[i] * a * a * ls.gamma_at(m, i);
            }
            h[m] = v;
        }
        for (int k : act)
        {
            double cross = 0.0;
            for (int m = 0; m < M; m++)
                cross += h[m] * ls.beta_at(m, k);
            double S = sum_a_gamma[k];
            double denom = sqrtP * (u[k] * u[k] * wbar[k] * S * S + cross);
            if (!(denom > 0.0))
                throw std::runtime_error("solve_wsr_cellfree: degenerate power update");
            eta[k] = std::min(wbar[k] * u[k] * S / denom, 1.0);
        }

        double next = objective(eta);
        if (plain_rounds >= 2)
        {
            bool moved = false;
            cand = eta;
            for (int k : act)
            {
                double d1 = eta[k] - e1[k], d0 = e1[k] - e2[k];
                if (d1 * d0 > 0.0 && std::abs(d1) < std::abs(d0))
                {
                    double r = std::min(d1 / d0, 0.995);
                    double raw = eta[k] + d1 * r / (1.0 - r);
                    // zero is absorbing for the plain updates, so committing a
                    // live coefficient there on an overshooting transient
                    // extrapolation would be irreversible; damp it instead
                    if (raw < drop_floor && eta[k] > zero_jump)
                        raw = 0.5 * eta[k];
                    cand[k] = std::clamp(raw, 0.0, 1.0);
                    moved = moved || cand[k] != eta[k];
                }
            }
            if (moved)
            {
                double ext = objective(cand);
                if (ext > next)
                {
                    eta = cand;
                    next = ext;
                    plain_rounds = -1; // trail broken, rebuild it
                }
            }
        }

        // retire coefficients that slid under the revival floor
        bool dropped = false;
        for (std::size_t i = 0; i < act.size();)
        {
            if (eta[act[i]] < drop_floor)
            {
                eta[act[i]] = 0.0;
                act.erase(act.begin() + static_cast<std::ptrdiff_t>(i));
                dropped = true;
            }
            else
                i++;
        }
        if (act.empty())
        {
            obj = 0.0;
            delta = 0.0;
            break;
        }
        if (dropped)
        {
            next = objective(eta);
            plain_rounds = -1;
        }

        if (!std::isfinite(next))
            throw std::runtime_error("solve_wsr_cellfree: objective became non-finite at round " + std::to_string(n));
        delta = std::abs(next - obj) / std::max(1.0, std::abs(obj));
        obj = next;
        e2 = e1;
        e1 = eta;
        plain_rounds = std::min(plain_rounds + 1, 3);
        if (delta <= tol)
            break;
    }

    for (int k : act)
        sol.power[k] = P * eta[k] * eta[k];
    // refresh the decoding weights to the optimum of the final powers so the
    // returned triple is self-consistent with the reported objective
    for (int m = 0; m < M; m++)
    {
        double v = 1.0;
        for (int i : act)
            v += sol.power[i] * ls.beta_at(m, i);
        load[m] = v;
    }
    for (int k : act)
    {
        double norm = 0.0;
        for (int m = 0; m < M; m++)
        {
            double a = (ls.gamma_at(m, k) > 0.0) ? 1.0 / load[m] : 0.0;
            sol.weights.at(m, k) = a;
            norm += a * a;
        }
        norm = std::sqrt(norm);
        if (norm > 0.0)
            for (int m = 0; m < M; m++)
                sol.weights.at(m, k) /= norm;
    }
    sol.diag.iterations = std::min(n, max_rounds);
    sol.diag.objective = obj;
    sol.diag.objective_delta = delta;
    return sol;
}

// -------------------------------------------------------------- rate ceilings

std::vector<double> rmax_per_user(const LargeScale &ls, Combiner comb)
{
    int K = ls.num_users, M = ls.num_antennas;
    double pre = ls.symbols_for_data(), P = ls.p_max;
    std::vector<double> r(K, 0.0);
    if (!ls.cellfree)
    {
        if (comb == Combiner::zf && M <= K)
            throw std::invalid_argument("rmax_per_user: zf requires num_antennas > num_users");
        for (int k = 0; k < K; k++)
        {
            double sinr;
            if (comb == Combiner::mrc)
                sinr = static_cast<double>(M) * P * ls.gamma[k] / (1.0 + ls.beta[k] * P);
            else if (comb == Combiner::zf)
                sinr = static_cast<double>(M - K) * P * ls.gamma[k] / (1.0 + (ls.beta[k] - ls.gamma[k]) * P);
            else
                throw std::invalid_argument("rmax_per_user: combiner must match the mode");
            r[k] = pre * std::log2(1.0 + sinr);
        }
    }
    else
    {
        if (comb != Combiner::lsfd)
            throw std::invalid_argument("rmax_per_user: cell-free snapshots use the lsfd combiner");
        // single user at full power; the optimal decoding weights give the
        // Rayleigh-quotient SINR sum_m P gamma_mk / (1 + P beta_mk)
        for (int k = 0; k < K; k++)
        {
            double sinr = 0.0;
            for (int m = 0; m < M; m++)
                sinr += P * ls.gamma_at(m, k) / (1.0 + P * ls.beta_at(m, k));
            r[k] = pre * std::log2(1.0 + sinr);
        }
    }
    return r;
}

} // namespace mimoq
