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

#include <doctest.h>

#include "baselines.hpp"
#include "channel.hpp"
#include "oracles.hpp"
#include "rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace mimoq;

namespace
{

LargeScale pinned(const std::vector<double> &snr_db, int M = 100)
{
    ScenarioConfig cfg;
    cfg.fixed_snr_db = snr_db;
    cfg.num_users = static_cast<int>(snr_db.size());
    cfg.num_antennas = M;
    cfg.shadowing_std_db = 0.0;
    return large_scale(generate_scenario(cfg, 1), static_cast<double>(snr_db.size()));
}

LargeScale cellfree_instance(int M, int K, std::uint64_t seed)
{
    ScenarioConfig cfg;
    cfg.mode = Mode::cellfree;
    cfg.combiner = Combiner::lsfd;
    cfg.num_antennas = M;
    cfg.num_users = K;
    cfg.area_side_m = 500.0;
    return large_scale(generate_scenario(cfg, seed), static_cast<double>(K));
}

} // namespace

TEST_CASE("backlog mask marks exactly the users with data")
{
    std::vector<char> m = active_mask(std::vector<double>{0.0, 5.0, 0.0});
    CHECK(m == std::vector<char>{0, 1, 0});
    m = active_mask(std::vector<double>{0.0, 0.0});
    CHECK(m == std::vector<char>{0, 0});
}

TEST_CASE("equalizing power control inverts the estimate gains")
{
    // equal gains: everyone at full power
    LargeScale ls = pinned({7.0, 7.0, 7.0});
    std::vector<char> all(3, 1);
    std::vector<double> p = mmf_colocated(ls, all);
    for (double v : p)
        CHECK(v == doctest::Approx(ls.p_max).epsilon(1e-12));

    // gains in ratio 1:2:4 invert to full, half, quarter power
    LargeScale ratio = pinned({0.0, 0.0, 0.0});
    ratio.gamma = {1e-4, 2e-4, 4e-4};
    p = mmf_colocated(ratio, all);
    CHECK(p[0] == doctest::Approx(ratio.p_max).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.5 * ratio.p_max).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(0.25 * ratio.p_max).epsilon(1e-12));
}

TEST_CASE("equalizing power control equalizes realized rates")
{
    LargeScale ls = pinned({-0.62, 3.27, 5.4, 6.5, 9.5, 10.0, 12.8, 15.7, 17.56, 22.36});
    std::vector<char> all(10, 1);
    std::vector<double> p = mmf_colocated(ls, all);
    for (Combiner comb : {Combiner::mrc, Combiner::zf})
    {
        std::vector<double> r = rate_colocated(ls, p, comb);
        for (int k = 1; k < 10; k++)
            CHECK(r[k] == doctest::Approx(r[0]).epsilon(1e-9));
    }
}

TEST_CASE("inactive users are excluded from the equalization")
{
    LargeScale ls = pinned({0.0, 10.0, 20.0});
    std::vector<char> act = {1, 0, 1};
    std::vector<double> p = mmf_colocated(ls, act);
    CHECK(p[1] == 0.0);
    std::vector<double> r = rate_colocated(ls, p, Combiner::mrc);
    CHECK(r[0] == doctest::Approx(r[2]).epsilon(1e-9));
}

TEST_CASE("log-utility power control saturates a single user")
{
    LargeScale ls = pinned({5.0});
    std::vector<char> one(1, 1);
    std::vector<double> p = pf_colocated(ls, Combiner::mrc, one);
    CHECK(p[0] == doctest::Approx(ls.p_max).epsilon(1e-7));
}

TEST_CASE("log-utility power control is symmetric for symmetric users")
{
    LargeScale ls = pinned({9.0, 9.0});
    std::vector<char> all(2, 1);
    for (Combiner comb : {Combiner::mrc, Combiner::zf})
    {
        std::vector<double> p = pf_colocated(ls, comb, all);
        CHECK(p[0] == doctest::Approx(p[1]).epsilon(1e-6));
    }
}

TEST_CASE("log-utility power control matches the grid oracle")
{
    LargeScale ls = pinned({2.0, 8.5, 14.0});
    std::vector<char> all(3, 1);
    std::vector<double> p = pf_colocated(ls, Combiner::mrc, all);
    GridSearchResult g = grid_search_pf(ls, Combiner::mrc, all, 41, 4);
    std::vector<double> r = rate_colocated(ls, p, Combiner::mrc);
    double f = 0.0;
    for (int k = 0; k < 3; k++)
        f += std::log(r[k] / ls.symbols_for_data() * std::log(2.0));
    CHECK(f == doctest::Approx(g.objective).epsilon(1e-4));
}

TEST_CASE("sum-utility power control handles the easy ends")
{
    LargeScale ls = pinned({5.0});
    std::vector<char> one(1, 1);
    std::vector<double> p = msr_colocated(ls, Combiner::mrc, one);
    CHECK(p[0] == doctest::Approx(ls.p_max).epsilon(1e-9));

    LargeScale ls3 = pinned({0.0, 10.0, 20.0});
    std::vector<char> none(3, 0);
    p = msr_colocated(ls3, Combiner::zf, none);
    CHECK(p == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("sum-utility power control matches the grid oracle")
{
    LargeScale ls = pinned({1.0, 9.0, 16.5});
    std::vector<char> all(3, 1);
    std::vector<double> p = msr_colocated(ls, Combiner::mrc, all);
    GridSearchResult g = grid_search_wsr(ls, std::vector<double>{1.0, 1.0, 1.0}, Combiner::mrc, 41, 4);
    std::vector<double> r = rate_colocated(ls, p, Combiner::mrc);
    double f = r[0] + r[1] + r[2];
    CHECK(f == doctest::Approx(g.objective).epsilon(1e-3));
}

TEST_CASE("single-user distributed equalization saturates and reports its sinr")
{
    LargeScale ls = cellfree_instance(1, 1, 55);
    std::vector<char> one(1, 1);
    CfMmfSolution sol = mmf_cellfree(ls, one, 1e-10, 300);
    CHECK(sol.power[0] == doctest::Approx(ls.p_max).epsilon(1e-6));
    double want = ls.p_max * ls.gamma_at(0, 0) * ls.gamma_at(0, 0) /
                  (ls.gamma_at(0, 0) * (1.0 + ls.p_max * ls.beta_at(0, 0)));
    CHECK(sol.min_sinr == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("symmetric distributed instance equalizes cleanly")
{
    LargeScale ls = cellfree_instance(2, 2, 56);
    // force exact symmetry across the two users
    for (int m = 0; m < 2; m++)
    {
        double b = 0.5 * (ls.beta_at(m, 0) + ls.beta_at(m, 1));
        ls.beta[static_cast<std::size_t>(m) * 2] = b;
        ls.beta[static_cast<std::size_t>(m) * 2 + 1] = b;
        double g = gamma_from_beta(b, ls.tau_p, ls.p_max);
        ls.gamma[static_cast<std::size_t>(m) * 2] = g;
        ls.gamma[static_cast<std::size_t>(m) * 2 + 1] = g;
    }
    std::vector<char> all(2, 1);
    CfMmfSolution sol = mmf_cellfree(ls, all, 1e-10, 300);
    CHECK(sol.power[0] == doctest::Approx(sol.power[1]).epsilon(1e-6));
    std::vector<double> s = sinr_cellfree(ls, sol.power, sol.weights);
    CHECK(s[0] == doctest::Approx(s[1]).epsilon(1e-6));
}

TEST_CASE("distributed equalization matches the grid oracle")
{
    LargeScale ls = cellfree_instance(3, 2, 57);
    std::vector<char> all(2, 1);
    CfMmfSolution sol = mmf_cellfree(ls, all, 1e-10, 300);
    GridSearchResult g = grid_search_cf_mmf(ls, all, 81, 4);
    CHECK(sol.min_sinr == doctest::Approx(g.objective).epsilon(1e-3));
    // the reported minimum matches a direct evaluation of the solution
    std::vector<double> s = sinr_cellfree(ls, sol.power, sol.weights);
    CHECK(std::min(s[0], s[1]) == doctest::Approx(sol.min_sinr).epsilon(1e-9));
}

TEST_CASE("distributed equalization trace never regresses")
{
    LargeScale ls = cellfree_instance(5, 3, 58);
    std::vector<char> all(3, 1);
    CfMmfSolution sol = mmf_cellfree(ls, all);
    REQUIRE(sol.min_sinr_trace.size() >= 1);
    for (std::size_t i = 1; i < sol.min_sinr_trace.size(); i++)
        CHECK(sol.min_sinr_trace[i] >= sol.min_sinr_trace[i - 1] * (1.0 - 1e-9));
    CHECK(sol.iterations == static_cast<int>(sol.min_sinr_trace.size()));
}

TEST_CASE("baseline solvers reject mismatched masks")
{
    LargeScale ls = pinned({0.0, 10.0});
    std::vector<char> bad(3, 1);
    CHECK_THROWS_AS(mmf_colocated(ls, bad), std::invalid_argument);
    CHECK_THROWS_AS(pf_colocated(ls, Combiner::mrc, bad), std::invalid_argument);
    CHECK_THROWS_AS(msr_colocated(ls, Combiner::mrc, bad), std::invalid_argument);
}
