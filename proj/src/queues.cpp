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

#include "queues.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mimoq
{

QueueState make_queue_state(int num_users)
{
    if (num_users < 1)
        throw std::invalid_argument("make_queue_state: num_users must be >= 1");
    QueueState st;
    st.reservoir.assign(num_users, 0.0);
    st.transmit.assign(num_users, 0.0);
    st.virtual_q.assign(num_users, 0.0);
    return st;
}

void Traffic::validate() const
{
    if (arrival_prob.empty())
        throw std::invalid_argument("traffic: arrival_prob must not be empty");
    for (double p : arrival_prob)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("traffic: arrival probabilities must lie in [0,1]");
    if (packet_bits < 0.0)
        throw std::invalid_argument("traffic: packet_bits must be nonnegative");
}

std::vector<double> generate_arrivals(const Traffic &tr, std::span<std::mt19937_64> engines)
{
    tr.validate();
    if (engines.size() != tr.arrival_prob.size())
        throw std::invalid_argument("generate_arrivals: need one engine per user");
    std::vector<double> b(tr.arrival_prob.size(), 0.0);
    for (std::size_t k = 0; k < b.size(); k++)
        if (uniform01(engines[k]) < tr.arrival_prob[k])
            b[k] = tr.packet_bits;
    return b;
}

static void check_len(const QueueState &st, std::size_t n, const char *what)
{
    if (st.reservoir.size() != n || st.transmit.size() != n || st.virtual_q.size() != n)
        throw std::invalid_argument(std::string(what) + ": vector length mismatch");
}

QueueState step_queues(const QueueState &st, std::span<const double> admitted, std::span<const double> rate,
                       std::span<const double> aux, std::span<const double> arrivals)
{
    std::size_t K = st.transmit.size();
    check_len(st, K, "step_queues");
    if (admitted.size() != K || rate.size() != K || aux.size() != K || arrivals.size() != K)
        throw std::invalid_argument("step_queues: vector length mismatch");

    QueueState next = st;
    next.slot = st.slot + 1;
    for (std::size_t k = 0; k < K; k++)
    {
        double a = admitted[k];
        if (a < 0.0 || rate[k] < 0.0 || aux[k] < 0.0 || arrivals[k] < 0.0)
            throw std::invalid_argument("step_queues: negative input");
        if (a > st.reservoir[k] * (1.0 + 1e-12) + 1e-9)
            throw std::invalid_argument("step_queues: admitted exceeds reservoir content");
        next.transmit[k] = std::max(st.transmit[k] - rate[k], 0.0) + a;
        next.virtual_q[k] = std::max(st.virtual_q[k] - a, 0.0) + aux[k];
        next.reservoir[k] = std::max(st.reservoir[k] - a, 0.0) + arrivals[k];
    }
    return next;
}

double lyapunov_value(const QueueState &st, double eta)
{
    if (eta < 0.0)
        throw std::invalid_argument("lyapunov_value: eta must be nonnegative");
    double q2 = 0.0, y2 = 0.0;
    for (double q : st.transmit)
        q2 += q * q;
    for (double y : st.virtual_q)
        y2 += y * y;
    return 0.5 * q2 + 0.5 * eta * y2;
}

bool check_drift_bound(const QueueState &st, const QueueState &next, std::span<const double> admitted,
                       std::span<const double> rate, std::span<const double> aux, double eta, double admit_cap,
                       std::span<const double> rate_max)
{
    std::size_t K = st.transmit.size();
    if (admitted.size() != K || rate.size() != K || aux.size() != K || rate_max.size() != K)
        throw std::invalid_argument("check_drift_bound: vector length mismatch");

    double c = 0.0;
    for (double r : rate_max)
        c += 0.5 * r * r;
    c += 0.5 * (2.0 * eta + 1.0) * static_cast<double>(K) * admit_cap * admit_cap;

    double lhs = lyapunov_value(next, eta) - lyapunov_value(st, eta);
    double rhs = c;
    for (std::size_t k = 0; k < K; k++)
    {
        rhs -= admitted[k] * (eta * st.virtual_q[k] - st.transmit[k]);
        rhs += eta * st.virtual_q[k] * aux[k];
        rhs -= st.transmit[k] * rate[k];
    }
    // purely numerical slack; the inequality is exact in real arithmetic
    double slack = 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs));
    return lhs <= rhs + slack;
}

} // namespace mimoq
