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

// Command line front end. Links only against the public C interface of the
// shared library, so it doubles as a smoke test for that boundary.

#include <mimoq/mimoq.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace
{

int report_error(int code)
{
    std::fprintf(stderr, "error: %s\n", mimoq_last_error());
    return code;
}

// pull the human-readable table out of the result document without a JSON
// parser: the "table" value is the last string field and uses \n escapes
std::string extract_table(const std::string &json)
{
    const std::string key = "\"table\": \"";
    std::size_t at = json.rfind(key);
    if (at == std::string::npos)
        return "";
    std::string out;
    for (std::size_t i = at + key.size(); i < json.size(); i++)
    {
        char c = json[i];
        if (c == '\\' && i + 1 < json.size())
        {
            char n = json[++i];
            if (n == 'n')
                out += '\n';
            else if (n == 't')
                out += '\t';
            else
                out += n;
        }
        else if (c == '"')
            break;
        else
            out += c;
    }
    return out;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"mimoq - queue-aware uplink scheduling and power control simulator"};
    app.require_subcommand(1);

    std::string spec_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    int jobs = 1;
    bool trace = false;
    bool quiet = false;

    CLI::App *run = app.add_subcommand("run", "run every variant/seed of an experiment spec");
    run->add_option("spec", spec_path, "experiment spec file")->required();
    run->add_option("overrides", overrides, "key=value settings applied over the base section");
    run->add_option("-o,--out", out_dir, "directory for experiment.json, tables and series CSVs");
    run->add_option("-j,--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    run->add_flag("--trace", trace, "write per-slot decision ledgers next to the other outputs");
    run->add_flag("-q,--quiet", quiet, "suppress the summary table");

    std::string suite = "all";
    CLI::App *verify = app.add_subcommand("verify", "run the built-in numerical self-checks");
    verify->add_option("suite", suite, "oracles, invariants or all")->check(CLI::IsMember({"oracles", "invariants", "all"}));

    CLI11_PARSE(app, argc, argv);

    if (run->parsed())
    {
        if (out_dir.empty())
        {
            const char *env = std::getenv("MIMOQ_OUT_DIR");
            if (env != nullptr)
                out_dir = env;
        }
        std::vector<const char *> ov;
        ov.reserve(overrides.size());
        for (const std::string &s : overrides)
            ov.push_back(s.c_str());
        char *json = nullptr;
        int rc = mimoq_experiment_run(spec_path.c_str(), ov.data(), ov.size(), out_dir.empty() ? nullptr : out_dir.c_str(),
                                      jobs, trace ? 1 : 0, &json);
        if (rc != MIMOQ_OK)
            return report_error(rc);
        if (!quiet && json != nullptr)
            std::fputs(extract_table(json).c_str(), stdout);
        if (!out_dir.empty())
            std::fprintf(stdout, "results written to %s\n", out_dir.c_str());
        mimoq_string_free(json);
        return 0;
    }

    // verify
    char *rep = nullptr;
    int rc = mimoq_verify(suite.c_str(), &rep);
    if (rep != nullptr)
        std::fputs(rep, stdout);
    mimoq_string_free(rep);
    if (rc != MIMOQ_OK && rc != MIMOQ_ERR_VERIFY)
        return report_error(rc);
    return rc;
}
