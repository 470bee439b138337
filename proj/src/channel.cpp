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

#include "channel.hpp"
#include "rng.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mimoq
{

// ------------------------------------------------------- validation helpers

static void require(bool ok, const std::string &msg)
{
    if (!ok)
        throw std::invalid_argument(msg);
}

void ScenarioConfig::validate() const
{
    require(num_antennas >= 1, "num_antennas must be >= 1");
    require(num_users >= 1, "num_users must be >= 1");
    require(tau_c > static_cast<double>(num_users), "tau_c must exceed num_users (pilots leave no data symbols)");
    require(p_max >= 0.0, "p_max must be nonnegative");
    require(edge_distance_m > 0.0, "edge_distance_m must be positive");
    require(area_side_m > 0.0, "area_side_m must be positive");
    require(pathloss_exponent > 0.0, "pathloss_exponent must be positive");
    require(shadowing_std_db >= 0.0, "shadowing_std_db must be nonnegative");
    require(min_distance_m > 0.0, "min_distance_m must be positive");
    require(cf.d0_m > 0.0 && cf.d1_m > cf.d0_m, "three-slope breakpoints need 0 < d0 < d1");
    require(cf.ref_distance_m > 0.0, "three-slope reference distance must be positive");
    if (mode == Mode::colocated)
        require(combiner == Combiner::mrc || combiner == Combiner::zf,
                "co-located mode requires the mrc or zf combiner");
    else
        require(combiner == Combiner::lsfd, "cell-free mode requires the lsfd combiner");
    if (combiner == Combiner::zf)
        require(num_antennas > num_users, "zf requires num_antennas > num_users");
    if (!fixed_snr_db.empty())
    {
        require(mode == Mode::colocated, "fixed per-user SNRs are only supported in co-located mode");
        require(static_cast<int>(fixed_snr_db.size()) == num_users,
                "fixed_snr_db needs exactly one entry per user");
    }
}

// ------------------------------------------------------------ gain formulas

double gamma_from_beta(double beta, double tau_p, double p_pilot)
{
    if (beta < 0.0 || tau_p <= 0.0 || p_pilot < 0.0)
        throw std::invalid_argument("gamma_from_beta: beta/p_pilot must be >= 0 and tau_p > 0");
    double tpb = tau_p * p_pilot * beta;
    return tpb * beta / (1.0 + tpb);
}

static double resolved_p_max(const ScenarioConfig &cfg)
{
    if (cfg.p_max > 0.0)
        return cfg.p_max;
    // Budget that puts an unshadowed edge user at edge_snr_db. The cell-free
    // far slope is anchored at the same reference, so one formula serves both
    // modes (with the anchoring exponent in the cell-free case).
    double exp = (cfg.mode == Mode::colocated) ? cfg.pathloss_exponent : cfg.cf.ref_exponent;
    return std::pow(10.0, cfg.edge_snr_db / 10.0) * std::pow(cfg.edge_distance_m, exp);
}

static double dist(const Point &a, const Point &b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Single-slope pathloss of the co-located mode, shadowing in dB.
static double beta_colocated(const ScenarioConfig &cfg, double d, double shadow_db)
{
    double dc = std::max(d, cfg.min_distance_m);
    return std::pow(10.0, shadow_db / 10.0) * std::pow(dc, -cfg.pathloss_exponent);
}

// Three-slope pathloss of the cell-free mode. Shadowing only acts on the far
// slope; the near and middle segments are deterministic, which keeps the
// profile continuous in the median.
static double beta_cellfree(const ThreeSlope &ts, double d, double shadow_db)
{
    double c_far = std::pow(ts.ref_distance_m, ts.far_exponent - ts.ref_exponent);
    if (d > ts.d1_m)
        return std::pow(10.0, shadow_db / 10.0) * c_far * std::pow(d, -ts.far_exponent);
    double c_mid = c_far * std::pow(ts.d1_m, ts.mid_exponent - ts.far_exponent);
    if (d > ts.d0_m)
        return c_mid * std::pow(d, -ts.mid_exponent);
    return c_mid * std::pow(ts.d0_m, -ts.mid_exponent);
}

// Recomputes sc.beta from positions and shadowing for one user column.
static void refresh_beta_user(Scenario &sc, int k)
{
    const ScenarioConfig &cfg = sc.cfg;
    int K = cfg.num_users;
    if (cfg.mode == Mode::colocated)
    {
        double d = dist(sc.user_pos[k], sc.ap_pos[0]);
        sc.beta[k] = beta_colocated(cfg, d, sc.shadow_db[k]);
    }
    else
    {
        for (int m = 0; m < cfg.num_antennas; m++)
        {
            double d = dist(sc.user_pos[k], sc.ap_pos[m]);
            sc.beta[static_cast<std::size_t>(m) * K + k] =
                beta_cellfree(cfg.cf, d, sc.shadow_db[static_cast<std::size_t>(m) * K + k]);
        }
    }
}

// --------------------------------------------------------------- generation

Scenario generate_scenario(const ScenarioConfig &cfg_in, std::uint64_t seed)
{
    ScenarioConfig cfg = cfg_in;
    cfg.validate();
    cfg.p_max = resolved_p_max(cfg);

    Scenario sc;
    sc.cfg = cfg;
    int M = cfg.num_antennas, K = cfg.num_users;

    if (!cfg.fixed_snr_db.empty())
    {
        // Gains pinned directly: beta_k * p_max = 10^(snr/10)
        sc.fixed_beta = true;
        sc.ap_pos = {Point{cfg.area_side_m / 2.0, cfg.area_side_m / 2.0}};
        sc.user_pos.assign(K, Point{});
        sc.shadow_db.assign(K, 0.0);
        sc.beta.resize(K);
        for (int k = 0; k < K; k++)
            sc.beta[k] = std::pow(10.0, cfg.fixed_snr_db[k] / 10.0) / cfg.p_max;
        return sc;
    }

    auto pos_eng = make_engine(seed, stream::positions);
    auto shadow_eng = make_engine(seed, stream::shadowing);

    if (cfg.mode == Mode::colocated)
        sc.ap_pos = {Point{cfg.area_side_m / 2.0, cfg.area_side_m / 2.0}};
    else
    {
        sc.ap_pos.resize(M);
        for (int m = 0; m < M; m++)
        {
            sc.ap_pos[m].x = uniform01(pos_eng) * cfg.area_side_m;
            sc.ap_pos[m].y = uniform01(pos_eng) * cfg.area_side_m;
        }
    }
    sc.user_pos.resize(K);
    for (int k = 0; k < K; k++)
    {
        sc.user_pos[k].x = uniform01(pos_eng) * cfg.area_side_m;
        sc.user_pos[k].y = uniform01(pos_eng) * cfg.area_side_m;
    }

    std::normal_distribution<double> shadow(0.0, cfg.shadowing_std_db);
    std::size_t links = (cfg.mode == Mode::colocated) ? static_cast<std::size_t>(K)
                                                      : static_cast<std::size_t>(M) * K;
    sc.shadow_db.resize(links);
    for (std::size_t i = 0; i < links; i++)
        sc.shadow_db[i] = (cfg.shadowing_std_db > 0.0) ? shadow(shadow_eng) : 0.0;

    sc.beta.resize(links);
    for (int k = 0; k < K; k++)
        refresh_beta_user(sc, k);
    return sc;
}

LargeScale large_scale(const Scenario &sc, double tau_p)
{
    const ScenarioConfig &cfg = sc.cfg;
    if (tau_p < 1.0 || tau_p >= cfg.tau_c)
        throw std::invalid_argument("large_scale: tau_p must lie in [1, tau_c)");
    LargeScale ls;
    ls.cellfree = (cfg.mode == Mode::cellfree);
    ls.num_antennas = cfg.num_antennas;
    ls.num_users = cfg.num_users;
    ls.tau_c = cfg.tau_c;
    ls.tau_p = tau_p;
    ls.p_max = cfg.p_max;
    ls.beta = sc.beta;
    ls.gamma.resize(sc.beta.size());
    for (std::size_t i = 0; i < sc.beta.size(); i++)
        ls.gamma[i] = gamma_from_beta(sc.beta[i], tau_p, cfg.p_max); // pilots at full power
    return ls;
}

void apply_random_walk(Scenario &sc, double max_step_m, std::mt19937_64 &engine)
{
    if (sc.fixed_beta)
        throw std::invalid_argument("apply_random_walk: scenario has pinned gains (fixed_snr_db)");
    if (max_step_m < 0.0)
        throw std::invalid_argument("apply_random_walk: max_step_m must be nonnegative");
    if (max_step_m == 0.0)
        return;

    const ScenarioConfig &cfg = sc.cfg;
    std::normal_distribution<double> shadow(0.0, cfg.shadowing_std_db);
    for (int k = 0; k < cfg.num_users; k++)
    {
        Point cand;
        int guard = 0;
        do
        {
            // direction and step length are resampled together until the
            // destination falls inside the service area
            double ang = 2.0 * M_PI * uniform01(engine);
            double step = max_step_m * uniform01(engine);
            cand.x = sc.user_pos[k].x + step * std::cos(ang);
            cand.y = sc.user_pos[k].y + step * std::sin(ang);
            if (++guard > 1000000)
                throw std::runtime_error("apply_random_walk: rejection sampling failed to terminate");
        } while (cand.x < 0.0 || cand.x > cfg.area_side_m || cand.y < 0.0 || cand.y > cfg.area_side_m);
        sc.user_pos[k] = cand;

        // a moved user decorrelates its shadowing
        if (cfg.mode == Mode::colocated)
            sc.shadow_db[k] = (cfg.shadowing_std_db > 0.0) ? shadow(engine) : 0.0;
        else
            for (int m = 0; m < cfg.num_antennas; m++)
                sc.shadow_db[static_cast<std::size_t>(m) * cfg.num_users + k] =
                    (cfg.shadowing_std_db > 0.0) ? shadow(engine) : 0.0;
        refresh_beta_user(sc, k);
    }
}

// -------------------------------------------------------------------- rates

static void check_power(const LargeScale &ls, std::span<const double> power)
{
    if (static_cast<int>(power.size()) != ls.num_users)
        throw std::invalid_argument("power vector length must equal num_users");
    double hi = ls.p_max * (1.0 + 1e-9);
    for (double p : power)
        if (!(p >= -1e-9 * ls.p_max) || p > hi)
            throw std::invalid_argument("power entries must lie in [0, p_max]");
}

std::vector<double> rate_colocated(const LargeScale &ls, std::span<const double> power, Combiner comb)
{
    if (ls.cellfree)
        throw std::invalid_argument("rate_colocated: snapshot belongs to the cell-free mode");
    check_power(ls, power);
    int K = ls.num_users, M = ls.num_antennas;
    double pre = ls.symbols_for_data();
    std::vector<double> rate(K, 0.0);

    if (comb == Combiner::mrc)
    {
        double denom = 1.0;
        for (int j = 0; j < K; j++)
            denom += ls.beta[j] * power[j];
        for (int k = 0; k < K; k++)
            rate[k] = pre * std::log2(1.0 + static_cast<double>(M) * power[k] * ls.gamma[k] / denom);
    }
    else if (comb == Combiner::zf)
    {
        if (M <= K)
            throw std::invalid_argument("zf requires num_antennas > num_users");
        // interference is only the channel-estimation residual beta - gamma
        double denom = 1.0;
        for (int j = 0; j < K; j++)
            denom += (ls.beta[j] - ls.gamma[j]) * power[j];
        for (int k = 0; k < K; k++)
            rate[k] = pre * std::log2(1.0 + static_cast<double>(M - K) * power[k] * ls.gamma[k] / denom);
    }
    else
        throw std::invalid_argument("rate_colocated: combiner must be mrc or zf");
    return rate;
}

std::vector<double> sinr_cellfree(const LargeScale &ls, std::span<const double> power, const LsfdWeights &w)
{
    if (!ls.cellfree)
        throw std::invalid_argument("sinr_cellfree: snapshot belongs to the co-located mode");
    check_power(ls, power);
    int M = ls.num_antennas, K = ls.num_users;
    if (w.num_antennas != M || w.num_users != K)
        throw std::invalid_argument("sinr_cellfree: weight shape mismatch");

    // load_m = 1 + sum_i p_i beta_mi, shared across users
    std::vector<double> load(M, 1.0);
    for (int m = 0; m < M; m++)
        for (int i = 0; i < K; i++)
            load[m] += power[i] * ls.beta_at(m, i);

    std::vector<double> sinr(K, 0.0);
    for (int k = 0; k < K; k++)
    {
        double sig = 0.0, den = 0.0;
        for (int m = 0; m < M; m++)
        {
            double a = w.at(m, k), g = ls.gamma_at(m, k);
            sig += a * g;
            den += a * a * g * load[m]; // includes the own-signal beta term
        }
        double num = power[k] * sig * sig;
        sinr[k] = (num > 0.0 && den > 0.0) ? num / den : 0.0;
    }
    return sinr;
}

std::vector<double> rate_cellfree(const LargeScale &ls, std::span<const double> power, const LsfdWeights &w)
{
    std::vector<double> s = sinr_cellfree(ls, power, w);
    double pre = ls.symbols_for_data();
    for (double &v : s)
        v = pre * std::log2(1.0 + v);
    return s;
}

// ----------------------------------------------------------- serialization

static std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string scenario_to_table(const Scenario &sc)
{
    const ScenarioConfig &c = sc.cfg;
    std::ostringstream os;
    os << "mimoq-scenario 1\n";
    os << "mode " << (c.mode == Mode::colocated ? "colocated" : "cellfree") << "\n";
    os << "combiner " << (c.combiner == Combiner::mrc ? "mrc" : c.combiner == Combiner::zf ? "zf" : "lsfd") << "\n";
    os << "num_antennas " << c.num_antennas << "\n";
    os << "num_users " << c.num_users << "\n";
    os << "tau_c " << fmt(c.tau_c) << "\n";
    os << "p_max " << fmt(c.p_max) << "\n";
    os << "area_side_m " << fmt(c.area_side_m) << "\n";
    os << "pathloss_exponent " << fmt(c.pathloss_exponent) << "\n";
    os << "shadowing_std_db " << fmt(c.shadowing_std_db) << "\n";
    os << "min_distance_m " << fmt(c.min_distance_m) << "\n";
    os << "cf " << fmt(c.cf.d0_m) << " " << fmt(c.cf.d1_m) << " " << fmt(c.cf.mid_exponent) << " "
       << fmt(c.cf.far_exponent) << " " << fmt(c.cf.ref_distance_m) << " " << fmt(c.cf.ref_exponent) << "\n";
    os << "tau_p_dynamic " << (c.tau_p_dynamic ? 1 : 0) << "\n";
    os << "fixed_beta " << (sc.fixed_beta ? 1 : 0) << "\n";
    if (!c.fixed_snr_db.empty())
    {
        os << "fixed_snr_db";
        for (double v : c.fixed_snr_db)
            os << " " << fmt(v);
        os << "\n";
    }
    for (const Point &p : sc.ap_pos)
        os << "ap " << fmt(p.x) << " " << fmt(p.y) << "\n";
    for (const Point &p : sc.user_pos)
        os << "user " << fmt(p.x) << " " << fmt(p.y) << "\n";
    os << "shadow_db";
    for (double v : sc.shadow_db)
        os << " " << fmt(v);
    os << "\nbeta";
    for (double v : sc.beta)
        os << " " << fmt(v);
    os << "\n";
    return os.str();
}

Scenario scenario_from_table(const std::string &text)
{
    std::istringstream is(text);
    std::string tag;
    int version = 0;
    if (!(is >> tag >> version) || tag != "mimoq-scenario" || version != 1)
        throw std::invalid_argument("scenario table: missing mimoq-scenario header");

    Scenario sc;
    ScenarioConfig &c = sc.cfg;
    std::string key;
    while (is >> key)
    {
        if (key == "mode")
        {
            std::string v;
            is >> v;
            c.mode = (v == "cellfree") ? Mode::cellfree : Mode::colocated;
        }
        else if (key == "combiner")
        {
            std::string v;
            is >> v;
            c.combiner = (v == "mrc") ? Combiner::mrc : (v == "zf") ? Combiner::zf : Combiner::lsfd;
        }
        else if (key == "num_antennas")
            is >> c.num_antennas;
        else if (key == "num_users")
            is >> c.num_users;
        else if (key == "tau_c")
            is >> c.tau_c;
        else if (key == "p_max")
            is >> c.p_max;
        else if (key == "area_side_m")
            is >> c.area_side_m;
        else if (key == "pathloss_exponent")
            is >> c.pathloss_exponent;
        else if (key == "shadowing_std_db")
            is >> c.shadowing_std_db;
        else if (key == "min_distance_m")
            is >> c.min_distance_m;
        else if (key == "cf")
            is >> c.cf.d0_m >> c.cf.d1_m >> c.cf.mid_exponent >> c.cf.far_exponent >> c.cf.ref_distance_m >>
                c.cf.ref_exponent;
        else if (key == "tau_p_dynamic")
        {
            int v;
            is >> v;
            c.tau_p_dynamic = (v != 0);
        }
        else if (key == "fixed_beta")
        {
            int v;
            is >> v;
            sc.fixed_beta = (v != 0);
        }
        else if (key == "fixed_snr_db")
        {
            c.fixed_snr_db.resize(c.num_users);
            for (double &v : c.fixed_snr_db)
                is >> v;
        }
        else if (key == "ap")
        {
            Point p;
            is >> p.x >> p.y;
            sc.ap_pos.push_back(p);
        }
        else if (key == "user")
        {
            Point p;
            is >> p.x >> p.y;
            sc.user_pos.push_back(p);
        }
        else if (key == "shadow_db")
        {
            std::size_t n = (c.mode == Mode::colocated) ? static_cast<std::size_t>(c.num_users)
                                                        : static_cast<std::size_t>(c.num_antennas) * c.num_users;
            sc.shadow_db.resize(n);
            for (double &v : sc.shadow_db)
                is >> v;
        }
        else if (key == "beta")
        {
            std::size_t n = (c.mode == Mode::colocated) ? static_cast<std::size_t>(c.num_users)
                                                        : static_cast<std::size_t>(c.num_antennas) * c.num_users;
            sc.beta.resize(n);
            for (double &v : sc.beta)
                is >> v;
        }
        else
            throw std::invalid_argument("scenario table: unknown key '" + key + "'");
        if (is.fail())
            throw std::invalid_argument("scenario table: malformed value for key '" + key + "'");
    }
    c.validate();
    if (sc.beta.empty() || static_cast<int>(sc.user_pos.size()) != c.num_users)
        throw std::invalid_argument("scenario table: incomplete snapshot");
    return sc;
}

} // namespace mimoq
