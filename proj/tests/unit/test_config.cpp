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

#include "config.hpp"
#include "experiment.hpp"

#include <stdexcept>
#include <string>

using namespace mimoq;

TEST_CASE("spec text parses into base keys and variants")
{
    std::string text = "# example experiment\n"
                       "name = demo\n"
                       "seeds = 3, 5, 7\n"
                       "num_users = 4\n"
                       "snr_db = 0, 5, 10, 15\n"
                       "arrival_prob = 0.5\n"
                       "\n"
                       "[variant fast]\n"
                       "slots = 100\n"
                       "[variant slow]\n"
                       "slots = 9000\n";
    ExperimentSpec spec = parse_experiment(text);
    CHECK(spec.name == "demo");
    CHECK(spec.seeds == std::vector<std::uint64_t>{3, 5, 7});
    CHECK(spec.base.at("num_users") == "4");
    REQUIRE(spec.variants.size() == 2);
    CHECK(spec.variants[0].first == "fast");
    CHECK(spec.variants[1].second.at("slots") == "9000");

    KeyValues merged = merged_keys(spec, 1);
    CHECK(merged.at("slots") == "9000");
    CHECK(merged.at("num_users") == "4");
}

TEST_CASE("an experiment without sections gets a default variant")
{
    ExperimentSpec spec = parse_experiment("num_users = 2\nsnr_db = 0, 5\n");
    REQUIRE(spec.variants.size() == 1);
    CHECK(spec.variants[0].first == "default");
    CHECK(spec.name == "experiment");
    CHECK(spec.seeds == std::vector<std::uint64_t>{1});
}

TEST_CASE("malformed spec lines are rejected")
{
    CHECK_THROWS_AS(parse_experiment("num_users 4\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment("[variant]\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment("[variant a]\nx = 1\n[variant a]\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_file("/nonexistent/path.spec"), std::invalid_argument);
}

TEST_CASE("command line overrides land in the base section")
{
    ExperimentSpec spec = parse_experiment("num_users = 2\nsnr_db = 0, 5\n");
    apply_overrides(spec, {"slots=123", "seeds=9,10", "name=other"});
    CHECK(spec.base.at("slots") == "123");
    CHECK(spec.seeds == std::vector<std::uint64_t>{9, 10});
    CHECK(spec.name == "other");
    CHECK_THROWS_AS(apply_overrides(spec, {"broken"}), std::invalid_argument);
}

TEST_CASE("defaults fill a minimal configuration")
{
    KeyValues kv;
    kv["num_users"] = "2";
    kv["snr_db"] = "0, 5";
    kv["arrival_prob"] = "0.5";
    SimConfig cfg = sim_config_from_keys(kv);
    CHECK(cfg.scenario.num_antennas == 100);
    CHECK(cfg.scenario.tau_c == 100.0);
    CHECK(cfg.traffic.packet_bits == 400.0);
    CHECK(cfg.scheduler.kind == SchedulerKind::dsa);
    CHECK(cfg.scheduler.dsa.admit_cap == 5000.0);
    CHECK(cfg.scheduler.dsa.penalty_v == 50000.0);
    CHECK(cfg.scheduler.dsa.eta == 1.0);
    CHECK(cfg.slots == 10000);
    CHECK(cfg.seed == 1);
    CHECK(cfg.scenario.combiner == Combiner::mrc);
}

TEST_CASE("cell-free mode defaults to distributed decoding weights")
{
    KeyValues kv;
    kv["mode"] = "cellfree";
    kv["num_antennas"] = "8";
    kv["num_users"] = "2";
    kv["arrival_prob"] = "0.5";
    SimConfig cfg = sim_config_from_keys(kv);
    CHECK(cfg.scenario.mode == Mode::cellfree);
    CHECK(cfg.scenario.combiner == Combiner::lsfd);
}

TEST_CASE("scalar arrival probability broadcasts and lists must match")
{
    KeyValues kv;
    kv["num_users"] = "3";
    kv["snr_db"] = "0, 5, 10";
    kv["arrival_prob"] = "0.25";
    SimConfig cfg = sim_config_from_keys(kv);
    CHECK(cfg.traffic.arrival_prob == std::vector<double>{0.25, 0.25, 0.25});

    kv["arrival_prob"] = "0.1, 0.2, 0.3";
    cfg = sim_config_from_keys(kv);
    CHECK(cfg.traffic.arrival_prob == std::vector<double>{0.1, 0.2, 0.3});

    kv["arrival_prob"] = "0.1, 0.2";
    CHECK_THROWS_AS(sim_config_from_keys(kv), std::invalid_argument);
}

TEST_CASE("unknown keys and bad values name the offender")
{
    KeyValues kv;
    kv["num_users"] = "2";
    kv["snr_db"] = "0, 5";
    kv["arrival_prob"] = "0.5";
    kv["no_such_key"] = "1";
    try
    {
        sim_config_from_keys(kv);
        FAIL("expected an exception");
    }
    catch (const std::invalid_argument &e)
    {
        CHECK(std::string(e.what()).find("no_such_key") != std::string::npos);
    }
    kv.erase("no_such_key");
    kv["slots"] = "abc";
    try
    {
        sim_config_from_keys(kv);
        FAIL("expected an exception");
    }
    catch (const std::invalid_argument &e)
    {
        CHECK(std::string(e.what()).find("slots") != std::string::npos);
    }
}

TEST_CASE("enum-valued keys reject unknown tokens")
{
    KeyValues kv;
    kv["num_users"] = "2";
    kv["snr_db"] = "0, 5";
    kv["arrival_prob"] = "0.5";
    kv["scheduler"] = "greedy";
    CHECK_THROWS_AS(sim_config_from_keys(kv), std::invalid_argument);
    kv["scheduler"] = "dsa";
    kv["fairness"] = "maxmin"; // spelled "mmf"
    CHECK_THROWS_AS(sim_config_from_keys(kv), std::invalid_argument);
    kv["fairness"] = "mmf";
    kv["tau_p"] = "adaptive";
    CHECK_THROWS_AS(sim_config_from_keys(kv), std::invalid_argument);
    kv["tau_p"] = "dynamic";
    CHECK_NOTHROW(sim_config_from_keys(kv));
}

TEST_CASE("combining cross-field constraints is caught at config time")
{
    KeyValues kv;
    kv["num_users"] = "2";
    kv["num_antennas"] = "2";
    kv["combiner"] = "zf"; // needs more antennas than users
    kv["arrival_prob"] = "0.5";
    CHECK_THROWS_AS(sim_config_from_keys(kv), std::invalid_argument);

    kv["num_antennas"] = "16";
    CHECK_NOTHROW(sim_config_from_keys(kv));

    kv["mode"] = "cellfree"; // interference nulling is co-located only
    CHECK_THROWS_AS(sim_config_from_keys(kv), std::invalid_argument);

    KeyValues cf;
    cf["mode"] = "cellfree";
    cf["num_antennas"] = "8";
    cf["num_users"] = "2";
    cf["arrival_prob"] = "0.5";
    cf["scheduler"] = "pf"; // log-utility heuristic is co-located only
    CHECK_THROWS_AS(sim_config_from_keys(cf), std::invalid_argument);
    cf["scheduler"] = "modified_mmf";
    CHECK_NOTHROW(sim_config_from_keys(cf));
}

TEST_CASE("full experiment run aggregates variant-major results")
{
    std::string text = "name = tiny\n"
                       "seeds = 1, 2\n"
                       "num_users = 2\n"
                       "snr_db = 0, 10\n"
                       "arrival_prob = 0.5\n"
                       "slots = 120\n"
                       "[variant a]\n"
                       "scheduler = mmf\n"
                       "[variant b]\n"
                       "scheduler = dsa\n";
    ExperimentSpec spec = parse_experiment(text);
    ExperimentResult res = run_experiment(spec, 2);
    CHECK(res.name == "tiny");
    REQUIRE(res.runs.size() == 4);
    CHECK(res.variant_names == std::vector<std::string>{"a", "b"});
    CHECK(res.runs[0].variant == "a");
    CHECK(res.runs[0].seed == 1);
    CHECK(res.runs[1].seed == 2);
    CHECK(res.runs[2].variant == "b");

    // multi-job execution matches the single-job result exactly
    ExperimentResult res1 = run_experiment(spec, 1);
    CHECK(experiment_json(res) == experiment_json(res1));

    std::string tab = format_table(res);
    CHECK(tab.find("tiny") != std::string::npos);
    CHECK(tab.find("\na ") != std::string::npos);
    CHECK(tab.find("\nb ") != std::string::npos);

    std::string js = experiment_json(res);
    CHECK(js.find("mimoq-experiment-1") != std::string::npos);
    CHECK(js.find("\"table\"") != std::string::npos);
}

TEST_CASE("single-run json document carries the per-user block")
{
    KeyValues kv;
    kv["num_users"] = "2";
    kv["snr_db"] = "0, 10";
    kv["arrival_prob"] = "0.4";
    kv["slots"] = "80";
    Metrics m = run_simulation(sim_config_from_keys(kv));
    std::string js = metrics_json(m);
    CHECK(js.find("\"users\"") != std::string::npos);
    CHECK(js.find("\"throughput\"") != std::string::npos);
    CHECK(js.find("\"drift_violations\"") != std::string::npos);
}
