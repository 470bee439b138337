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

#include <span>
#include <vector>

namespace mimoq
{

// Brute-force references, deliberately independent of the production solver
// paths: plain enumeration over power grids with local zoom refinement.
// Only practical for a handful of users; the dimension is guarded.

struct GridSearchResult
{
    std::vector<double> power;
    double objective = 0.0;
};

// max sum_k w_k R_k by enumerating [0, p_max]^K on a points-per-dim grid,
// then re-gridding one cell around the argmax zoom_levels times.
GridSearchResult grid_search_wsr(const LargeScale &ls, std::span<const double> weights, Combiner comb,
                                 int points_per_dim, int zoom_levels = 3);

// max sum_{active} ln(ln(1 + sinr_k)) on the same kind of grid
GridSearchResult grid_search_pf(const LargeScale &ls, Combiner comb, std::span<const char> active, int points_per_dim,
                                int zoom_levels = 3);

// Largest common SINR of the cell-free uplink: enumerates the linear power
// fractions of the active users on a grid, with the per-point best decoding
// weights (the closed-form per-user SINR maximizer); returns min-SINR at the
// argmax. objective = min-SINR, power = p_max * eta.
GridSearchResult grid_search_cf_mmf(const LargeScale &ls, std::span<const char> active, int points_per_dim,
                                    int zoom_levels = 3);

// Grid reference for the per-slot auxiliary subproblem at a given
// resolution (cap / (points-1)). Enumerating [0, cap]^K reduces exactly:
// msr and pf are coordinate-separable, and for mmf the objective at any
// grid point is dominated by the equal-coordinate point at its minimum, so
// scanning the diagonal covers the full grid.
std::vector<double> grid_search_auxiliary(std::span<const double> virtual_q, const DsaParams &par, int points);

} // namespace mimoq
