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

#include "config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mimoq
{

// ----------------------------------------------------------------- low level

static std::string trim(const std::string &s)
{
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

static double parse_double(const std::string &key, const std::string &v)
{
    try
    {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (trim(v.substr(used)).empty())
            return d;
    }
    catch (const std::exception &)
    {
    }
    throw std::invalid_argument("config key '" + key + "': not a number: '" + v + "'");
}

static long parse_long(const std::string &key, const std::string &v)
{
    try
    {
        std::size_t used = 0;
        long d = std::stol(v, &used);
        if (trim(v.substr(used)).empty())
            return d;
    }
    catch (const std::exception &)
    {
    }
    throw std::invalid_argument("config key '" + key + "': not an integer: '" + v + "'");
}

static bool parse_bool(const std::string &key, const std::string &v)
{
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    throw std::invalid_argument("config key '" + key + "': not a boolean: '" + v + "'");
}

static std::vector<std::string> split_list(const std::string &v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    if (!out.empty() && out.back().empty())
        out.pop_back();
    return out;
}

static std::vector<double> parse_double_list(const std::string &key, const std::string &v)
{
    std::vector<double> out;
    for (const std::string &s : split_list(v))
        out.push_back(parse_double(key, s));
    if (out.empty())
        throw std::invalid_argument("config key '" + key + "': empty list");
    return out;
}

// ------------------------------------------------------------ file structure

ExperimentSpec parse_experiment(const std::string &text)
{
    ExperimentSpec spec;
    KeyValues *target = &spec.base;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line))
    {
        lineno++;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']')
                throw std::invalid_argument("line " + std::to_string(lineno) + ": unterminated section heading");
            std::string head = trim(line.substr(1, line.size() - 2));
            if (head.rfind("variant", 0) != 0)
                throw std::invalid_argument("line " + std::to_string(lineno) +
                                            ": section heading must read [variant NAME]");
            std::string name = trim(head.substr(7));
            if (name.empty())
                throw std::invalid_argument("line " + std::to_string(lineno) + ": variant name missing");
            for (const auto &v : spec.variants)
                if (v.first == name)
                    throw std::invalid_argument("line " + std::to_string(lineno) + ": duplicate variant '" + name +
                                                "'");
            spec.variants.emplace_back(name, KeyValues{});
            target = &spec.variants.back().second;
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("line " + std::to_string(lineno) + ": empty key");
        (*target)[key] = val;
    }

    // experiment-level keys live in the base section
    if (auto it = spec.base.find("name"); it != spec.base.end())
    {
        spec.name = it->second;
        spec.base.erase(it);
    }
    if (auto it = spec.base.find("seeds"); it != spec.base.end())
    {
        spec.seeds.clear();
        for (const std::string &s : split_list(it->second))
            spec.seeds.push_back(static_cast<std::uint64_t>(parse_long("seeds", s)));
        if (spec.seeds.empty())
            throw std::invalid_argument("config key 'seeds': empty list");
        spec.base.erase(it);
    }
    if (spec.variants.empty())
        spec.variants.emplace_back("default", KeyValues{});
    return spec;
}

ExperimentSpec parse_experiment_file(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw std::invalid_argument("cannot open experiment file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_experiment(ss.str());
}

void apply_overrides(ExperimentSpec &spec, const std::vector<std::string> &overrides)
{
    for (const std::string &o : overrides)
    {
        std::size_t eq = o.find('=');
        if (eq == std::string::npos || trim(o.substr(0, eq)).empty())
            throw std::invalid_argument("override must read key=value: '" + o + "'");
        std::string key = trim(o.substr(0, eq));
        std::string val = trim(o.substr(eq + 1));
        if (key == "name")
            spec.name = val;
        else if (key == "seeds")
        {
            spec.seeds.clear();
            for (const std::string &s : split_list(val))
                spec.seeds.push_back(static_cast<std::uint64_t>(parse_long("seeds", s)));
        }
        else
            spec.base[key] = val;
    }
}

KeyValues merged_keys(const ExperimentSpec &spec, std::size_t variant_index)
{
    if (variant_index >= spec.variants.size())
        throw std::invalid_argument("merged_keys: variant index out of range");
    KeyValues kv = spec.base;
    for (const auto &[k, v] : spec.variants[variant_index].second)
        kv[k] = v;
    return kv;
}

// ------------------------------------------------------------- key semantics

SimConfig sim_config_from_keys(const KeyValues &kv)
{
    SimConfig cfg;
    ScenarioConfig &sc = cfg.scenario;
    bool combiner_set = false, arrival_set = false;
    std::vector<double> arrival;
    double packet_bits = 400.0;

    for (const auto &[key, val] : kv)
    {
        if (key == "mode")
        {
            if (val == "colocated")
                sc.mode = Mode::colocated;
            else if (val == "cellfree")
                sc.mode = Mode::cellfree;
            else
                throw std::invalid_argument("config key 'mode': expected colocated or cellfree, got '" + val + "'");
        }
        else if (key == "combiner")
        {
            combiner_set = true;
            if (val == "mrc")
                sc.combiner = Combiner::mrc;
            else if (val == "zf")
                sc.combiner = Combiner::zf;
            else if (val == "lsfd")
                sc.combiner = Combiner::lsfd;
            else
                throw std::invalid_argument("config key 'combiner': expected mrc, zf or lsfd, got '" + val + "'");
        }
        else if (key == "num_antennas")
            sc.num_antennas = static_cast<int>(parse_long(key, val));
        else if (key == "num_users")
            sc.num_users = static_cast<int>(parse_long(key, val));
        else if (key == "tau_c")
            sc.tau_c = parse_double(key, val);
        else if (key == "p_max")
            sc.p_max = parse_double(key, val);
        else if (key == "edge_snr_db")
            sc.edge_snr_db = parse_double(key, val);
        else if (key == "edge_distance_m")
            sc.edge_distance_m = parse_double(key, val);
        else if (key == "area_side_m")
            sc.area_side_m = parse_double(key, val);
        else if (key == "pathloss_exponent")
            sc.pathloss_exponent = parse_double(key, val);
        else if (key == "shadowing_std_db")
            sc.shadowing_std_db = parse_double(key, val);
        else if (key == "min_distance_m")
            sc.min_distance_m = parse_double(key, val);
        else if (key == "snr_db")
            sc.fixed_snr_db = parse_double_list(key, val);
        else if (key == "tau_p")
        {
            if (val == "fixed")
                sc.tau_p_dynamic = false;
            else if (val == "dynamic")
                sc.tau_p_dynamic = true;
            else
                throw std::invalid_argument("config key 'tau_p': expected fixed or dynamic, got '" + val + "'");
        }
        else if (key == "cf_d0_m")
            sc.cf.d0_m = parse_double(key, val);
        else if (key == "cf_d1_m")
            sc.cf.d1_m = parse_double(key, val);
        else if (key == "cf_mid_exponent")
            sc.cf.mid_exponent = parse_double(key, val);
        else if (key == "cf_far_exponent")
            sc.cf.far_exponent = parse_double(key, val);
        else if (key == "cf_ref_distance_m")
            sc.cf.ref_distance_m = parse_double(key, val);
        else if (key == "cf_ref_exponent")
            sc.cf.ref_exponent = parse_double(key, val);
        else if (key == "arrival_prob")
        {
            arrival = parse_double_list(key, val);
            arrival_set = true;
        }
        else if (key == "packet_bits")
            packet_bits = parse_double(key, val);
        else if (key == "scheduler")
        {
            if (val == "dsa")
                cfg.scheduler.kind = SchedulerKind::dsa;
            else if (val == "mmf")
                cfg.scheduler.kind = SchedulerKind::mmf;
            else if (val == "modified_mmf")
                cfg.scheduler.kind = SchedulerKind::modified_mmf;
            else if (val == "pf")
                cfg.scheduler.kind = SchedulerKind::pf;
            else if (val == "modified_pf")
                cfg.scheduler.kind = SchedulerKind::modified_pf;
            else if (val == "msr")
                cfg.scheduler.kind = SchedulerKind::msr;
            else if (val == "modified_msr")
                cfg.scheduler.kind = SchedulerKind::modified_msr;
            else
                throw std::invalid_argument("config key 'scheduler': unknown policy '" + val + "'");
        }
        else if (key == "fairness")
        {
            if (val == "mmf")
                cfg.scheduler.dsa.fairness = Fairness::mmf;
            else if (val == "pf")
                cfg.scheduler.dsa.fairness = Fairness::pf;
            else if (val == "msr")
                cfg.scheduler.dsa.fairness = Fairness::msr;
            else
                throw std::invalid_argument("config key 'fairness': expected mmf, pf or msr, got '" + val + "'");
        }
        else if (key == "penalty_v")
            cfg.scheduler.dsa.penalty_v = parse_double(key, val);
        else if (key == "eta")
            cfg.scheduler.dsa.eta = parse_double(key, val);
        else if (key == "admit_cap")
            cfg.scheduler.dsa.admit_cap = parse_double(key, val);
        else if (key == "baseline_mask")
        {
            if (val == "reservoir")
                cfg.scheduler.mask = BaselineMask::reservoir;
            else if (val == "backlog")
                cfg.scheduler.mask = BaselineMask::backlog;
            else
                throw std::invalid_argument("config key 'baseline_mask': expected reservoir or backlog, got '" + val +
                                            "'");
        }
        else if (key == "baseline_tol")
            cfg.scheduler.baseline_tol = parse_double(key, val);
        else if (key == "slots")
            cfg.slots = parse_long(key, val);
        else if (key == "seed")
            cfg.seed = static_cast<std::uint64_t>(parse_long(key, val));
        else if (key == "warmup_fraction")
            cfg.warmup_fraction = parse_double(key, val);
        else if (key == "series_points")
            cfg.series_points = static_cast<int>(parse_long(key, val));
        else if (key == "slot_seconds")
            cfg.slot_seconds = parse_double(key, val);
        else if (key == "check_drift")
            cfg.check_drift = parse_bool(key, val);
        else if (key == "mobility")
        {
            if (val == "none")
                cfg.mobility.model = MobilityModel::none;
            else if (val == "random_walk")
                cfg.mobility.model = MobilityModel::random_walk;
            else
                throw std::invalid_argument("config key 'mobility': expected none or random_walk, got '" + val + "'");
        }
        else if (key == "mobility_step_m")
            cfg.mobility.max_step_m = parse_double(key, val);
        else if (key == "mobility_period")
            cfg.mobility.period_slots = parse_long(key, val);
        else
            throw std::invalid_argument("unknown config key '" + key + "'");
    }

    if (!combiner_set)
        sc.combiner = (sc.mode == Mode::cellfree) ? Combiner::lsfd : Combiner::mrc;
    if (!arrival_set)
        arrival = {1.0};
    if (arrival.size() == 1)
        arrival.assign(sc.num_users, arrival[0]);
    if (static_cast<int>(arrival.size()) != sc.num_users)
        throw std::invalid_argument("config key 'arrival_prob': expected 1 or num_users entries");
    cfg.traffic.arrival_prob = arrival;
    cfg.traffic.packet_bits = packet_bits;

    // defaults tuned for the reference deployment (tau_c = 100)
    if (kv.find("admit_cap") == kv.end())
        cfg.scheduler.dsa.admit_cap = 5000.0;
    if (kv.find("penalty_v") == kv.end())
        cfg.scheduler.dsa.penalty_v = 50000.0;

    cfg.validate();
    return cfg;
}

} // namespace mimoq
