// SPDX-License-Identifier: Apache-2.0
//
// mprsim - slotted MAC simulator for multi-packet reception channels
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
// ------------------------------------------------------------------------

// Command-line front end. Talks to the simulator exclusively through the
// C API in mprsim/mprsim.h.
//
//   mprsim run    [--config FILE] [flags]
//   mprsim sweep  --param u|n|k|threshold|cwmin --values V1,V2,... [flags]
//   mprsim kequiv MATRIX_FILE [--tie min|middle]
//
// Exit codes: 0 success, 2 configuration error, 1 internal error.

#include "mprsim/mprsim.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;

int
ExitCode(mprsim_status status)
{
    switch (status)
    {
    case MPRSIM_OK:
        return kExitOk;
    case MPRSIM_ERR_INTERNAL:
    case MPRSIM_ERR_STATE:
        return kExitInternal;
    default:
        return kExitConfig;
    }
}

int
Report(mprsim_status status)
{
    std::cerr << "mprsim: " << mprsim_status_string(status) << ": " << mprsim_last_error() << '\n';
    return ExitCode(status);
}

struct ConfigHandle
{
    mprsim_config* ptr = nullptr;
    ~ConfigHandle() { mprsim_config_destroy(ptr); }
};

// Simulation flags shared by run and sweep; each maps to a config key.
struct SimFlags
{
    std::string config_file;
    std::vector<std::pair<std::string, std::string>> values;
    bool saturated = false;
    CLI::App* app = nullptr;

    void Attach(CLI::App& sub)
    {
        app = &sub;
        sub.add_option("--config", config_file, "key = value config file; flags override it");
        static const std::vector<std::pair<const char*, const char*>> kFlags = {
            {"--policy", "dcf|threshold|adaptive"},
            {"--k", "MPR capability K"},
            {"--kt", "adaptive threshold (default K-1)"},
            {"--lt", "threshold-policy threshold (default K-1)"},
            {"--n", "number of stations"},
            {"--u", "normalized offered traffic"},
            {"--rate-pps", "Poisson rate per station"},
            {"--cwmin", "minimum contention window"},
            {"--m", "maximum backoff stage"},
            {"--retry-limit", "retransmissions before a drop"},
            {"--slot-us", "slot time"},
            {"--difs-us", "DIFS"},
            {"--payload-bits", "payload size"},
            {"--mac-header-bits", "MAC header size"},
            {"--phy-header-bits", "PHY header size"},
            {"--bitrate", "channel bit rate"},
            {"--duration-slots", "simulated slots"},
            {"--warmup-slots", "slots excluded from statistics"},
            {"--seed", "master seed"},
            {"--replications", "independent seeds per point"},
            {"--trace", "write a per-slot trace of the first replication"},
            {"--out", "csv|json"},
        };
        values.reserve(kFlags.size());
        for (const auto& [flag, help] : kFlags)
        {
            values.emplace_back(std::string(flag).substr(2), std::string());
            sub.add_option(flag, values.back().second, help);
        }
        sub.get_option("--u")->excludes("--rate-pps");
        sub.add_flag("--saturated", saturated, "every station always has a packet");
    }

    mprsim_status Apply(mprsim_config* config) const
    {
        if (!config_file.empty())
        {
            if (auto s = mprsim_config_load_file(config, config_file.c_str()); s != MPRSIM_OK)
            {
                return s;
            }
        }
        for (const auto& [key, value] : values)
        {
            if (app->get_option("--" + key)->count() == 0)
            {
                continue;
            }
            if (auto s = mprsim_config_set(config, key.c_str(), value.c_str()); s != MPRSIM_OK)
            {
                return s;
            }
        }
        if (saturated)
        {
            return mprsim_config_set(config, "saturated", "true");
        }
        return MPRSIM_OK;
    }
};

mprsim_output
OutputFormat(const mprsim_config* config, mprsim_output fallback)
{
    mprsim_output out = MPRSIM_OUTPUT_UNSET;
    mprsim_config_output(config, &out);
    return out == MPRSIM_OUTPUT_UNSET ? fallback : out;
}

int
CmdRun(const SimFlags& flags, unsigned threads)
{
    ConfigHandle config;
    if (auto s = mprsim_config_create(&config.ptr); s != MPRSIM_OK)
    {
        return Report(s);
    }
    if (auto s = flags.Apply(config.ptr); s != MPRSIM_OK)
    {
        return Report(s);
    }
    if (auto s = mprsim_config_validate(config.ptr); s != MPRSIM_OK)
    {
        return Report(s);
    }
    uint32_t replications = 1;
    const char* trace = nullptr;
    mprsim_config_replications(config.ptr, &replications);
    mprsim_config_trace_path(config.ptr, &trace);

    mprsim_report* report = nullptr;
    if (auto s = mprsim_run(config.ptr, replications, threads, trace, &report); s != MPRSIM_OK)
    {
        return Report(s);
    }
    const char* text = nullptr;
    const auto status = OutputFormat(config.ptr, MPRSIM_OUTPUT_JSON) == MPRSIM_OUTPUT_CSV
                            ? mprsim_report_to_csv(report, &text)
                            : mprsim_report_to_json(report, &text);
    if (status == MPRSIM_OK)
    {
        std::cout << text;
    }
    mprsim_report_destroy(report);
    return status == MPRSIM_OK ? kExitOk : Report(status);
}

int
CmdSweep(const SimFlags& flags,
         const std::string& parameter,
         const std::vector<double>& values,
         const std::string& output_file,
         unsigned threads)
{
    ConfigHandle config;
    if (auto s = mprsim_config_create(&config.ptr); s != MPRSIM_OK)
    {
        return Report(s);
    }
    if (auto s = flags.Apply(config.ptr); s != MPRSIM_OK)
    {
        return Report(s);
    }
    uint32_t replications = 1;
    mprsim_config_replications(config.ptr, &replications);

    mprsim_sweep* sweep = nullptr;
    if (auto s = mprsim_sweep_run(
            config.ptr, parameter.c_str(), values.data(), values.size(), replications, threads, &sweep);
        s != MPRSIM_OK)
    {
        return Report(s);
    }
    const char* text = nullptr;
    const auto status = OutputFormat(config.ptr, MPRSIM_OUTPUT_CSV) == MPRSIM_OUTPUT_JSON
                            ? mprsim_sweep_to_json(sweep, &text)
                            : mprsim_sweep_to_csv(sweep, &text);
    int code = status == MPRSIM_OK ? kExitOk : Report(status);
    if (status == MPRSIM_OK)
    {
        if (output_file.empty())
        {
            std::cout << text;
        }
        else
        {
            std::ofstream out(output_file);
            out << text;
            if (!out)
            {
                std::cerr << "mprsim: cannot write '" << output_file << "'\n";
                code = kExitConfig;
            }
        }
    }
    mprsim_sweep_destroy(sweep);
    return code;
}

int
CmdKequiv(const std::string& path, const std::string& tie)
{
    mprsim_matrix* matrix = nullptr;
    if (auto s = mprsim_matrix_load_file(path.c_str(), &matrix); s != MPRSIM_OK)
    {
        return Report(s);
    }
    const mprsim_tie_rule rule = tie == "middle" ? MPRSIM_TIE_MIDDLE : MPRSIM_TIE_MINIMUM;
    size_t k = 0;
    size_t rows = 0;
    mprsim_matrix_size(matrix, &rows);
    auto status = mprsim_matrix_kequiv(matrix, rule, &k);
    if (status == MPRSIM_OK)
    {
        std::cout << "k_equiv = " << k << "\nexpected_successes =";
        for (size_t i = 1; i <= rows && status == MPRSIM_OK; ++i)
        {
            double expected = 0.0;
            status = mprsim_matrix_expected_successes(matrix, i, &expected);
            char buf[32];
            std::snprintf(buf, sizeof buf, " %.6g", expected);
            std::cout << buf;
        }
        std::cout << '\n';
    }
    mprsim_matrix_destroy(matrix);
    return status == MPRSIM_OK ? kExitOk : Report(status);
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Slotted MAC simulator for multi-packet reception channels"};
    app.require_subcommand(1);
    unsigned threads = 0;

    auto* run = app.add_subcommand("run", "run one configuration, print a JSON report");
    SimFlags run_flags;
    run_flags.Attach(*run);
    run->add_option("--threads", threads, "worker threads for replications (0 = all cores)");

    auto* sweep = app.add_subcommand("sweep", "sweep one parameter, print CSV rows");
    SimFlags sweep_flags;
    sweep_flags.Attach(*sweep);
    std::string parameter;
    std::vector<double> values;
    std::string output_file;
    sweep->add_option("--param", parameter, "u|n|k|threshold|cwmin")->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
    sweep->add_option("--output", output_file, "write to this file instead of stdout");
    sweep->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* kequiv = app.add_subcommand("kequiv", "equivalent MPR capability of a reception matrix");
    std::string matrix_path;
    std::string tie = "min";
    kequiv->add_option("matrix", matrix_path, "reception matrix file")->required();
    kequiv->add_option("--tie", tie, "tie rule")->check(CLI::IsMember({"min", "middle"}));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return kExitConfig;
    }

    try
    {
        if (run->parsed())
        {
            return CmdRun(run_flags, threads);
        }
        if (sweep->parsed())
        {
            return CmdSweep(sweep_flags, parameter, values, output_file, threads);
        }
        return CmdKequiv(matrix_path, tie);
    }
    catch (const std::exception& e)
    {
        std::cerr << "mprsim: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
