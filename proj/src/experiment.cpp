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

#include "experiment.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mimoq
{

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

static std::string sanitize(const std::string &s)
{
    std::string out;
    for (char c : s)
        out.push_back((std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_');
    return out.empty() ? std::string("unnamed") : out;
}

ExperimentResult run_experiment(const ExperimentSpec &spec, int jobs, const std::string &trace_dir)
{
    if (jobs < 1)
        throw std::invalid_argument("run_experiment: jobs must be >= 1");
    if (spec.seeds.empty())
        throw std::invalid_argument("run_experiment: no seeds");

    ExperimentResult res;
    res.name = spec.name;
    res.seeds = spec.seeds;

    // resolve every variant configuration up front so a bad key fails fast
    std::vector<SimConfig> configs;
    for (std::size_t v = 0; v < spec.variants.size(); v++)
    {
        res.variant_names.push_back(spec.variants[v].first);
        try
        {
            configs.push_back(sim_config_from_keys(merged_keys(spec, v)));
        }
        catch (const std::invalid_argument &e)
        {
            throw std::invalid_argument("variant '" + spec.variants[v].first + "': " + e.what());
        }
    }

    if (!trace_dir.empty())
        fs::create_directories(trace_dir);

    std::size_t total = spec.variants.size() * spec.seeds.size();
    res.runs.resize(total);
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::string err_what;

    auto work = [&]() {
        for (;;)
        {
            std::size_t i = cursor.fetch_add(1);
            if (i >= total || failed.load())
                return;
            std::size_t v = i / spec.seeds.size(), s = i % spec.seeds.size();
            try
            {
                SimConfig cfg = configs[v];
                cfg.seed = spec.seeds[s];
                RunResult rr;
                rr.variant = spec.variants[v].first;
                rr.seed = cfg.seed;
                if (!trace_dir.empty())
                {
                    fs::path p = fs::path(trace_dir) /
                                 ("trace_" + sanitize(rr.variant) + "_s" + std::to_string(rr.seed) + ".csv");
                    std::ofstream tf(p);
                    if (!tf)
                        throw std::runtime_error("cannot open trace file: " + p.string());
                    rr.metrics = run_simulation(cfg, &tf);
                }
                else
                    rr.metrics = run_simulation(cfg, nullptr);
                res.runs[i] = std::move(rr);
            }
            catch (const std::exception &e)
            {
                std::lock_guard<std::mutex> lk(err_mutex);
                if (!failed.exchange(true))
                    err_what = e.what();
            }
        }
    };

    int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), total));
    if (workers <= 1)
        work();
    else
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; w++)
            pool.emplace_back(work);
        for (auto &th : pool)
            th.join();
    }
    if (failed.load())
        throw std::runtime_error("experiment run failed: " + err_what);
    return res;
}

// ------------------------------------------------------------------- output

static ordered_json finite_or_null(double v)
{
    if (std::isfinite(v))
        return v;
    return nullptr;
}

// seed-averaged per-user statistic; infinities propagate
static std::vector<double> seed_mean(const ExperimentResult &r, std::size_t v, double UserMetrics::*field)
{
    std::size_t S = r.seeds.size();
    int K = r.runs[v * S].metrics.num_users;
    std::vector<double> out(K, 0.0);
    for (std::size_t s = 0; s < S; s++)
        for (int k = 0; k < K; k++)
            out[k] += r.runs[v * S + s].metrics.users[k].*field / static_cast<double>(S);
    return out;
}

std::string format_table(const ExperimentResult &r)
{
    std::ostringstream os;
    os << "experiment: " << r.name << "  (seeds:";
    for (auto s : r.seeds)
        os << " " << s;
    os << ")\n";
    char row[256];
    std::snprintf(row, sizeof(row), "%-24s %4s %12s %14s %12s %14s %7s\n", "variant", "user", "lambda", "thpt(b/slot)",
                  "thpt(b/cu)", "delay(s/bit)", "stable");
    os << row;
    std::size_t S = r.seeds.size();
    for (std::size_t v = 0; v < r.variant_names.size(); v++)
    {
        const Metrics &m0 = r.runs[v * S].metrics;
        std::vector<double> thpt = seed_mean(r, v, &UserMetrics::throughput);
        std::vector<double> bcu = seed_mean(r, v, &UserMetrics::throughput_bcu);
        std::vector<double> delay = seed_mean(r, v, &UserMetrics::delay);
        for (int k = 0; k < m0.num_users; k++)
        {
            bool stable = true;
            for (std::size_t s = 0; s < S; s++)
                stable = stable && r.runs[v * S + s].metrics.users[k].stable;
            std::snprintf(row, sizeof(row), "%-24s %4d %12.6g %14.6g %12.6g %14.6g %7s\n",
                          r.variant_names[v].c_str(), k + 1, m0.users[k].arrival_rate, thpt[k], bcu[k], delay[k],
                          stable ? "yes" : "no");
            os << row;
        }
        long checks = 0, viol = 0;
        for (std::size_t s = 0; s < S; s++)
        {
            checks += r.runs[v * S + s].metrics.drift_checks;
            viol += r.runs[v * S + s].metrics.drift_violations;
        }
        if (checks > 0)
            os << "  [" << r.variant_names[v] << "] drift bound: " << viol << " violations in " << checks
               << " checks\n";
    }
    return os.str();
}

static ordered_json run_json(const Metrics &m)
{
    ordered_json jr;
    jr["slots"] = m.slots;
    jr["warmup_slots"] = m.warmup_slots;
    jr["tau_c"] = m.tau_c;
    jr["drift_checks"] = m.drift_checks;
    jr["drift_violations"] = m.drift_violations;
    jr["solver_rounds_mean"] = m.solver_rounds_mean;
    jr["solver_rounds_max"] = m.solver_rounds_max;
    jr["users"] = ordered_json::array();
    for (const UserMetrics &u : m.users)
    {
        ordered_json ju;
        ju["arrival_rate"] = u.arrival_rate;
        ju["realized_arrival_rate"] = u.realized_arrival_rate;
        ju["admitted_rate"] = u.admitted_rate;
        ju["throughput"] = u.throughput;
        ju["throughput_bcu"] = u.throughput_bcu;
        ju["avg_queue"] = u.avg_queue;
        ju["delay"] = finite_or_null(u.delay);
        ju["queue_slope"] = u.queue_slope;
        ju["stable"] = u.stable;
        jr["users"].push_back(std::move(ju));
    }
    return jr;
}

std::string metrics_json(const Metrics &m)
{
    ordered_json root = run_json(m);
    return root.dump(2) + "\n";
}

std::string experiment_json(const ExperimentResult &r)
{
    ordered_json root;
    root["schema"] = "mimoq-experiment-1";
    root["name"] = r.name;
    root["seeds"] = r.seeds;
    root["variants"] = ordered_json::array();
    std::size_t S = r.seeds.size();
    for (std::size_t v = 0; v < r.variant_names.size(); v++)
    {
        ordered_json jv;
        jv["name"] = r.variant_names[v];
        jv["runs"] = ordered_json::array();
        for (std::size_t s = 0; s < S; s++)
        {
            ordered_json jr = run_json(r.runs[v * S + s].metrics);
            ordered_json withseed;
            withseed["seed"] = r.runs[v * S + s].seed;
            for (auto &item : jr.items())
                withseed[item.key()] = std::move(item.value());
            jv["runs"].push_back(std::move(withseed));
        }
        const Metrics &m0 = r.runs[v * S].metrics;
        ordered_json mean;
        std::vector<double> thpt = seed_mean(r, v, &UserMetrics::throughput);
        std::vector<double> bcu = seed_mean(r, v, &UserMetrics::throughput_bcu);
        std::vector<double> delay = seed_mean(r, v, &UserMetrics::delay);
        std::vector<double> q = seed_mean(r, v, &UserMetrics::avg_queue);
        mean["throughput"] = thpt;
        mean["throughput_bcu"] = bcu;
        mean["delay"] = ordered_json::array();
        for (double d : delay)
            mean["delay"].push_back(finite_or_null(d));
        mean["avg_queue"] = q;
        mean["stable"] = ordered_json::array();
        for (int k = 0; k < m0.num_users; k++)
        {
            bool stable = true;
            for (std::size_t s = 0; s < S; s++)
                stable = stable && r.runs[v * S + s].metrics.users[k].stable;
            mean["stable"].push_back(stable);
        }
        jv["mean"] = std::move(mean);
        root["variants"].push_back(std::move(jv));
    }
    root["table"] = format_table(r);
    return root.dump(2) + "\n";
}

static std::string csv_num(double v)
{
    if (!std::isfinite(v))
        return v > 0 ? "inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_experiment_outputs(const ExperimentResult &r, const std::string &out_dir)
{
    fs::create_directories(out_dir);
    {
        std::ofstream f(fs::path(out_dir) / "experiment.json");
        if (!f)
            throw std::runtime_error("cannot write " + out_dir + "/experiment.json");
        f << experiment_json(r);
    }

    std::size_t S = r.seeds.size();
    int K = r.runs[0].metrics.num_users;
    auto write_matrix = [&](const char *fname, double UserMetrics::*field) {
        std::ofstream f(fs::path(out_dir) / fname);
        if (!f)
            throw std::runtime_error(std::string("cannot write ") + fname);
        f << "user";
        for (const std::string &v : r.variant_names)
            f << "," << v;
        f << "\n";
        std::vector<std::vector<double>> cols;
        for (std::size_t v = 0; v < r.variant_names.size(); v++)
            cols.push_back(seed_mean(r, v, field));
        for (int k = 0; k < K; k++)
        {
            f << (k + 1);
            for (const auto &c : cols)
                f << "," << csv_num(c[k]);
            f << "\n";
        }
    };
    write_matrix("throughput.csv", &UserMetrics::throughput_bcu);
    write_matrix("delay.csv", &UserMetrics::delay);

    // per-variant time series from the first seed
    for (std::size_t v = 0; v < r.variant_names.size(); v++)
    {
        const Metrics &m = r.runs[v * S].metrics;
        std::string tag = sanitize(r.variant_names[v]);
        std::ofstream fd(fs::path(out_dir) / ("delay_series_" + tag + ".csv"));
        std::ofstream fq(fs::path(out_dir) / ("queue_series_" + tag + ".csv"));
        if (!fd || !fq)
            throw std::runtime_error("cannot write series files for variant " + tag);
        fd << "slot";
        fq << "slot";
        for (int k = 0; k < m.num_users; k++)
        {
            fd << ",user" << (k + 1);
            fq << ",user" << (k + 1);
        }
        fd << "\n";
        fq << "\n";
        for (const SeriesPoint &sp : m.series)
        {
            fd << sp.slot;
            fq << sp.slot;
            for (int k = 0; k < m.num_users; k++)
            {
                fd << "," << csv_num(sp.delay[k]);
                fq << "," << csv_num(sp.queue[k]);
            }
            fd << "\n";
            fq << "\n";
        }
    }
}

} // namespace mimoq
