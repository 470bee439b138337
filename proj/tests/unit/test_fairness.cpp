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

#include "fairness.hpp"
#include "oracles.hpp"
#include "rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace mimoq;

namespace
{

DsaParams params(Fairness f, double v, double eta, double cap)
{
    DsaParams p;
    p.fairness = f;
    p.penalty_v = v;
    p.eta = eta;
    p.admit_cap = cap;
    return p;
}

} // namespace

TEST_CASE("admission is all-or-nothing on the queue differential")
{
    DsaParams par = params(Fairness::mmf, 10.0, 1.0, 20.0);

    // Q=5 < eta Y=10: admit everything available (capped)
    std::vector<double> a = admit(std::vector<double>{3.0}, std::vector<double>{5.0}, std::vector<double>{10.0}, par);
    CHECK(a[0] == 3.0);

    // Q=11 > eta Y=10: admit nothing
    a = admit(std::vector<double>{3.0}, std::vector<double>{11.0}, std::vector<double>{10.0}, par);
    CHECK(a[0] == 0.0);

    // boundary Q = eta Y admits
    a = admit(std::vector<double>{3.0}, std::vector<double>{10.0}, std::vector<double>{10.0}, par);
    CHECK(a[0] == 3.0);

    // the cap binds when the reservoir holds more
    a = admit(std::vector<double>{50.0}, std::vector<double>{0.0}, std::vector<double>{10.0}, par);
    CHECK(a[0] == 20.0);
}

TEST_CASE("admission scales the threshold with the deficit weight")
{
    DsaParams par = params(Fairness::mmf, 10.0, 2.0, 100.0);
    // Q=15 vs eta*Y = 2*10 = 20: admit
    std::vector<double> a = admit(std::vector<double>{4.0}, std::vector<double>{15.0}, std::vector<double>{10.0}, par);
    CHECK(a[0] == 4.0);
    par.eta = 1.0;
    a = admit(std::vector<double>{4.0}, std::vector<double>{15.0}, std::vector<double>{10.0}, par);
    CHECK(a[0] == 0.0);
}

TEST_CASE("equal-floor targets are all-or-nothing in the reward weight")
{
    // sum of deficits 90 below the reward weight 100: full targets
    DsaParams par = params(Fairness::mmf, 100.0, 1.0, 15.0);
    std::vector<double> y = {30.0, 30.0, 30.0};
    std::vector<double> nu = solve_auxiliary(y, par);
    CHECK(nu == std::vector<double>{15.0, 15.0, 15.0});

    // raise the deficits: targets collapse to zero
    y = {40.0, 40.0, 40.0};
    nu = solve_auxiliary(y, par);
    CHECK(nu == std::vector<double>{0.0, 0.0, 0.0});

    // exact tie keeps the targets at zero
    y = {40.0, 30.0, 30.0};
    nu = solve_auxiliary(y, par);
    CHECK(nu == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("log-utility targets saturate when the deficit vanishes")
{
    DsaParams par = params(Fairness::pf, 500.0 * 100.0, 1.0, 2000.0);
    std::vector<double> y = {0.0, 1000.0, 25.0};
    std::vector<double> nu = solve_auxiliary(y, par);
    CHECK(nu[0] == 2000.0);                                   // V/(eta*0) caps out
    CHECK(nu[1] == doctest::Approx(50.0).epsilon(1e-12));     // V/(eta*y)
    CHECK(nu[2] == 2000.0);                                   // V/(eta*25) = 2000 hits the cap
}

TEST_CASE("sum-rate targets threshold each deficit against the reward weight")
{
    DsaParams par = params(Fairness::msr, 100.0, 1.0, 10.0);
    std::vector<double> y = {50.0, 150.0, 100.0};
    std::vector<double> nu = solve_auxiliary(y, par);
    CHECK(nu[0] == 10.0);
    CHECK(nu[1] == 0.0);
    CHECK(nu[2] == 0.0); // V = eta Y exactly: strict inequality required
}

TEST_CASE("sum-rate targets match the brute-force grid")
{
    std::mt19937_64 eng = make_engine(31, 70);
    DsaParams par = params(Fairness::msr, 0.0, 1.3, 2000.0);
    for (int trial = 0; trial < 50; trial++)
    {
        par.penalty_v = 3e3 * uniform01(eng);
        std::vector<double> y(4);
        for (double &v : y)
            v = 3e3 * uniform01(eng);
        std::vector<double> nu = solve_auxiliary(y, par);
        std::vector<double> ref = grid_search_auxiliary(y, par, 201);
        for (int k = 0; k < 4; k++)
            CHECK(std::abs(nu[k] - ref[k]) <= 2000.0 / 200.0 + 1e-9);
    }
}

TEST_CASE("utility values at fixed points")
{
    std::vector<double> x = {2.0, 5.0, 3.0};
    CHECK(utility_value(x, Fairness::mmf) == 2.0);
    x = {1.0, 2.0, 3.0};
    CHECK(utility_value(x, Fairness::msr) == 6.0);
    double e = std::exp(1.0);
    x = {e, e * e};
    CHECK(utility_value(x, Fairness::pf) == doctest::Approx(3.0).epsilon(1e-12));
    x = {0.0, 1.0};
    CHECK(utility_value(x, Fairness::pf) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("parameter validation")
{
    DsaParams par = params(Fairness::mmf, 10.0, 1.0, 20.0);
    CHECK_NOTHROW(par.validate());
    par.eta = 0.0;
    CHECK_THROWS_AS(par.validate(), std::invalid_argument);
    par.eta = 1.0;
    par.penalty_v = -1.0;
    CHECK_THROWS_AS(par.validate(), std::invalid_argument);
    par.penalty_v = 1.0;
    par.admit_cap = -2.0;
    CHECK_THROWS_AS(par.validate(), std::invalid_argument);
}

TEST_CASE("mismatched state lengths are rejected")
{
    DsaParams par = params(Fairness::mmf, 10.0, 1.0, 20.0);
    CHECK_THROWS_AS(admit(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}, std::vector<double>{1.0}, par),
                    std::invalid_argument);
}
