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

#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace mimoq
{

namespace
{

// fresh scalar evaluation of the co-located SINRs (kept separate from the
// production rate path on purpose)
void oracle_sinr_colocated(const LargeScale &ls, Combiner comb, const std::vector<double> &p,
                           std::vector<double> &sinr)
{
    int K = ls.num_users, M = ls.num_antennas;
    double den = 1.0;
    for (int j = 0; j < K; j++)
        den += (comb == Combiner::mrc ? ls.beta[j] : ls.beta[j] - ls.gamma[j]) * p[j];
    double arr = comb == Combiner::mrc ? static_cast<double>(M) : static_cast<double>(M - K);
    for (int k = 0; k < K; k++)
        sinr[k] = arr * p[k] * ls.gamma[k] / den;
}

// enumerate a box grid with zoom refinement around the best cell
GridSearchResult refine_grid(int dims, double hi_val, int points, int zooms,
                             const std::function<double(const std::vector<double> &)> &objective)
{
    if (dims < 1 || dims > 4)
        throw std::invalid_argument("grid search: supported for 1 to 4 dimensions");
    if (points < 2)
        throw std::invalid_argument("grid search: need at least 2 points per dimension");

    std::vector<double> lo(dims, 0.0), hi(dims, hi_val);
    GridSearchResult best;
    best.power.assign(dims, 0.0);
    best.objective = -std::numeric_limits<double>::infinity();

    for (int level = 0; level <= zooms; level++)
    {
        int n = (level == 0) ? points : 41;
        std::vector<int> idx(dims, 0);
        std::vector<double> x(dims, 0.0), arg(dims, 0.0);
        double lvl_best = -std::numeric_limits<double>::infinity();
        for (;;)
        {
            for (int d = 0; d < dims; d++)
                x[d] = lo[d] + (hi[d] - lo[d]) * static_cast<double>(idx[d]) / static_cast<double>(n - 1);
            double v = objective(x);
            if (v > lvl_best)
            {
                lvl_best = v;
                arg = x;
            }
            int d = 0;
            while (d < dims && ++idx[d] == n)
                idx[d++] = 0;
            if (d == dims)
                break;
        }
        if (lvl_best > best.objective)
        {
            best.objective = lvl_best;
            best.power = arg;
        }
        // shrink to a few cells around the incumbent; on a flat ridge the
        // sampled argmax can sit more than one cell from the continuum peak,
        // so a single-cell window would lock onto the wrong segment
        for (int d = 0; d < dims; d++)
        {
            double cell = (hi[d] - lo[d]) / static_cast<double>(n - 1);
            double c = best.power[d];
            lo[d] = std::max(c - 3.0 * cell, 0.0);
            hi[d] = std::min(c + 3.0 * cell, hi_val);
        }
    }
    return best;
}

} // namespace

GridSearchResult grid_search_wsr(const LargeScale &ls, std::span<const double> weights, Combiner comb,
                                 int points_per_dim, int zoom_levels)
{
    if (ls.cellfree)
        throw std::invalid_argument("grid_search_wsr: co-located snapshots only");
    int K = ls.num_users;
    if (static_cast<int>(weights.size()) != K)
        throw std::invalid_argument("grid_search_wsr: weight length mismatch");
    double pre = ls.symbols_for_data();
    std::vector<double> sinr(K);
    return refine_grid(K, ls.p_max, points_per_dim, zoom_levels, [&](const std::vector<double> &p) {
        oracle_sinr_colocated(ls, comb, p, sinr);
        double v = 0.0;
        for (int k = 0; k < K; k++)
            v += weights[k] * pre * std::log2(1.0 + sinr[k]);
        return v;
    });
}

GridSearchResult grid_search_pf(const LargeScale &ls, Combiner comb, std::span<const char> active, int points_per_dim,
                                int zoom_levels)
{
    if (ls.cellfree)
        throw std::invalid_argument("grid_search_pf: co-located snapshots only");
    int K = ls.num_users;
    if (static_cast<int>(active.size()) != K)
        throw std::invalid_argument("grid_search_pf: active mask length mismatch");
    std::vector<int> act;
    for (int k = 0; k < K; k++)
        if (active[k])
            act.push_back(k);
    if (act.empty())
        throw std::invalid_argument("grid_search_pf: no active users");

    std::vector<double> sinr(K), full(K, 0.0);
    GridSearchResult g =
        refine_grid(static_cast<int>(act.size()), ls.p_max, points_per_dim, zoom_levels,
                    [&](const std::vector<double> &pa) {
                        for (std::size_t i = 0; i < act.size(); i++)
                            full[act[i]] = pa[i];
                        oracle_sinr_colocated(ls, comb, full, sinr);
                        double v = 0.0;
                        for (int k : act)
                        {
                            double lr = std::log1p(sinr[k]);
                            if (lr <= 0.0)
                                return -std::numeric_limits<double>::infinity();
                            v += std::log(lr);
                        }
                        return v;
                    });
    // expand back to a full-length power vector
    std::vector<double> p(K, 0.0);
    for (std::size_t i = 0; i < act.size(); i++)
        p[act[i]] = g.power[i];
    g.power = std::move(p);
    return g;
}

GridSearchResult grid_search_cf_mmf(const LargeScale &ls, std::span<const char> active, int points_per_dim,
                                    int zoom_levels)
{
    if (!ls.cellfree)
        throw std::invalid_argument("grid_search_cf_mmf: cell-free snapshots only");
    int K = ls.num_users, M = ls.num_antennas;
    if (static_cast<int>(active.size()) != K)
        throw std::invalid_argument("grid_search_cf_mmf: active mask length mismatch");
    std::vector<int> act;
    for (int k = 0; k < K; k++)
        if (active[k])
            act.push_back(k);
    if (act.empty())
        throw std::invalid_argument("grid_search_cf_mmf: no active users");
    double P = ls.p_max;

    std::vector<double> w2(M);
    GridSearchResult g = refine_grid(
        static_cast<int>(act.size()), 1.0, points_per_dim, zoom_levels, [&](const std::vector<double> &eta) {
            // per-point best decoding weights: a_mk proportional to 1/load_m
            for (int m = 0; m < M; m++)
            {
                double v = 1.0;
                for (std::size_t i = 0; i < act.size(); i++)
                    v += P * eta[i] * ls.beta_at(m, act[i]);
                w2[m] = v;
            }
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < act.size(); i++)
            {
                int k = act[i];
                double sig = 0.0, den = 0.0;
                for (int m = 0; m < M; m++)
                    if (ls.gamma_at(m, k) > 0.0)
                    {
                        double a = 1.0 / w2[m];
                        sig += a * ls.gamma_at(m, k);
                        den += a * a * ls.gamma_at(m, k) * w2[m];
                    }
                double s = den > 0.0 ? P * eta[i] * sig * sig / den : 0.0;
                worst = std::min(worst, s);
            }
            return worst;
        });
    std::vector<double> p(K, 0.0);
    for (std::size_t i = 0; i < act.size(); i++)
        p[act[i]] = P * g.power[i];
    g.power = std::move(p);
    return g;
}

std::vector<double> grid_search_auxiliary(std::span<const double> virtual_q, const DsaParams &par, int points)
{
    par.validate();
    if (points < 2)
        throw std::invalid_argument("grid_search_auxiliary: need at least 2 points");
    std::size_t K = virtual_q.size();
    double cap = par.admit_cap;
    std::vector<double> nu(K, 0.0);
    auto grid = [&](int i) { return cap * static_cast<double>(i) / static_cast<double>(points - 1); };

    switch (par.fairness)
    {
    case Fairness::mmf:
    {
        // the full-grid maximum sits on the equal-coordinate diagonal: any
        // grid point is dominated by the diagonal point at its own minimum
        double ysum = 0.0;
        for (double y : virtual_q)
            ysum += y;
        double best = -std::numeric_limits<double>::infinity(), bestm = 0.0;
        for (int i = 0; i < points; i++)
        {
            double m = grid(i);
            double v = par.penalty_v * m - par.eta * ysum * m;
            if (v > best)
            {
                best = v;
                bestm = m;
            }
        }
        std::fill(nu.begin(), nu.end(), bestm);
        break;
    }
    case Fairness::pf:
        // separable: the K-dim grid maximum is the per-coordinate maximum;
        // any zero coordinate makes the objective -inf, so scan positives
        for (std::size_t k = 0; k < K; k++)
        {
            double best = -std::numeric_limits<double>::infinity(), bestv = grid(1);
            for (int i = 1; i < points; i++)
            {
                double x = grid(i);
                double v = par.penalty_v * std::log(x) - par.eta * virtual_q[k] * x;
                if (v > best)
                {
                    best = v;
                    bestv = x;
                }
            }
            nu[k] = bestv;
        }
        break;
    case Fairness::msr:
        // separable linear: per-coordinate scan equals the full grid
        for (std::size_t k = 0; k < K; k++)
        {
            double best = -std::numeric_limits<double>::infinity(), bestv = 0.0;
            for (int i = 0; i < points; i++)
            {
                double x = grid(i);
                double v = (par.penalty_v - par.eta * virtual_q[k]) * x;
                if (v > best)
                {
                    best = v;
                    bestv = x;
                }
            }
            nu[k] = bestv;
        }
        break;
    }
    return nu;
}

} // namespace mimoq
