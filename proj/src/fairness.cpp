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

#include "fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mimoq
{

void DsaParams::validate() const
{
    if (penalty_v < 0.0)
        throw std::invalid_argument("dsa: penalty_v must be nonnegative");
    if (eta <= 0.0)
        throw std::invalid_argument("dsa: eta must be positive");
    if (admit_cap < 0.0)
        throw std::invalid_argument("dsa: admit_cap must be nonnegative");
}

static void check_nonneg(std::span<const double> v, const char *what)
{
    for (double x : v)
        if (!(x >= 0.0))
            throw std::invalid_argument(std::string(what) + " must be nonnegative");
}

std::vector<double> admit(std::span<const double> reservoir, std::span<const double> transmit,
                          std::span<const double> virtual_q, const DsaParams &par)
{
    par.validate();
    std::size_t K = reservoir.size();
    if (transmit.size() != K || virtual_q.size() != K)
        throw std::invalid_argument("admit: vector length mismatch");
    check_nonneg(reservoir, "admit: reservoir");
    check_nonneg(transmit, "admit: transmit");
    check_nonneg(virtual_q, "admit: virtual_q");

    std::vector<double> a(K, 0.0);
    for (std::size_t k = 0; k < K; k++)
        if (transmit[k] <= par.eta * virtual_q[k]) // bang-bang; tie admits
            a[k] = std::min(reservoir[k], par.admit_cap);
    return a;
}

std::vector<double> solve_auxiliary(std::span<const double> virtual_q, const DsaParams &par)
{
    par.validate();
    check_nonneg(virtual_q, "solve_auxiliary: virtual_q");
    std::size_t K = virtual_q.size();
    std::vector<double> nu(K, 0.0);

    switch (par.fairness)
    {
    case Fairness::mmf:
    {
        // At an optimum all coordinates share one value m (lowering any
        // coordinate to the minimum only reduces the penalty), so the
        // objective is (V - eta sum_k Y_k) m: all-or-nothing in m.
        double ysum = 0.0;
        for (double y : virtual_q)
            ysum += y;
        if (par.penalty_v > par.eta * ysum)
            std::fill(nu.begin(), nu.end(), par.admit_cap);
        break;
    }
    case Fairness::pf:
        // stationary point of V ln(nu) - eta Y nu, clipped to the box;
        // Y = 0 pushes to the cap
        for (std::size_t k = 0; k < K; k++)
        {
            double y = virtual_q[k];
            if (y <= 0.0)
                nu[k] = par.admit_cap;
            else
            {
                double t = par.penalty_v / (par.eta * y);
                nu[k] = std::isfinite(t) ? std::min(t, par.admit_cap) : par.admit_cap;
            }
        }
        break;
    case Fairness::msr:
        // separable linear objective (V - eta Y_k) nu_k
        for (std::size_t k = 0; k < K; k++)
            if (par.penalty_v > par.eta * virtual_q[k])
                nu[k] = par.admit_cap;
        break;
    }
    return nu;
}

double utility_value(std::span<const double> x, Fairness f)
{
    if (x.empty())
        throw std::invalid_argument("utility_value: empty input");
    check_nonneg(x, "utility_value: x");
    switch (f)
    {
    case Fairness::mmf:
        return *std::min_element(x.begin(), x.end());
    case Fairness::pf:
    {
        double s = 0.0;
        for (double v : x)
        {
            if (v <= 0.0)
                return -std::numeric_limits<double>::infinity();
            s += std::log(v);
        }
        return s;
    }
    case Fairness::msr:
    {
        double s = 0.0;
        for (double v : x)
            s += v;
        return s;
    }
    }
    throw std::invalid_argument("utility_value: unknown fairness");
}

} // namespace mimoq
