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

#include "mprsim/mprsim.h"

#include "mprsim/channel.hpp"
#include "mprsim/config.hpp"
#include "mprsim/engine.hpp"
#include "mprsim/errors.hpp"
#include "mprsim/format.hpp"
#include "mprsim/sweep.hpp"

#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

struct mprsim_config
{
    mprsim::ConfigSettings settings;
    std::string json;
};

struct mprsim_report
{
    nlohmann::json config_echo;
    std::vector<mprsim::MetricsReport> reports;
    mprsim::ReplicationSummary summary;
    std::string text;
};

struct mprsim_sweep
{
    mprsim::SweepParameter parameter;
    std::vector<mprsim::SweepRow> rows;
    std::string text;
};

struct mprsim_matrix
{
    mprsim::ReceptionMatrix matrix;
};

namespace
{

thread_local std::string g_last_error;

mprsim_status
Fail(mprsim_status status, std::string message)
{
    g_last_error = std::move(message);
    return status;
}

// Maps the library's exception hierarchy onto status codes.
template <typename Body>
mprsim_status
Guard(Body body)
{
    try
    {
        body();
        return MPRSIM_OK;
    }
    catch (const mprsim::ConfigMismatchError& e)
    {
        return Fail(MPRSIM_ERR_MISMATCH, e.what());
    }
    catch (const mprsim::ConfigError& e)
    {
        return Fail(MPRSIM_ERR_CONFIG, e.what());
    }
    catch (const mprsim::MatrixError& e)
    {
        return Fail(MPRSIM_ERR_MATRIX, e.what());
    }
    catch (const mprsim::IndexError& e)
    {
        return Fail(MPRSIM_ERR_ARGUMENT, e.what());
    }
    catch (const mprsim::IoError& e)
    {
        return Fail(MPRSIM_ERR_IO, e.what());
    }
    catch (const mprsim::StateError& e)
    {
        return Fail(MPRSIM_ERR_STATE, e.what());
    }
    catch (const std::exception& e)
    {
        return Fail(MPRSIM_ERR_INTERNAL, e.what());
    }
    catch (...)
    {
        return Fail(MPRSIM_ERR_INTERNAL, "unknown error");
    }
}

#define MPRSIM_REQUIRE(ptr)                                                                        \
    do                                                                                             \
    {                                                                                              \
        if ((ptr) == nullptr)                                                                      \
        {                                                                                          \
            return Fail(MPRSIM_ERR_ARGUMENT, #ptr " must not be null");                            \
        }                                                                                          \
    } while (0)

mprsim_summary
ToC(const mprsim::ReplicationSummary& s)
{
    return mprsim_summary{s.throughput.mean,
                          s.throughput.std,
                          s.delay_us.mean,
                          s.delay_us.std,
                          s.eta.mean,
                          s.eta.std,
                          s.dropped.mean,
                          static_cast<uint32_t>(s.replications)};
}

} // namespace

extern "C" {

const char*
mprsim_version(void)
{
    return "1.0.0";
}

const char*
mprsim_last_error(void)
{
    return g_last_error.c_str();
}

const char*
mprsim_status_string(mprsim_status status)
{
    switch (status)
    {
    case MPRSIM_OK:
        return "ok";
    case MPRSIM_ERR_ARGUMENT:
        return "invalid argument";
    case MPRSIM_ERR_CONFIG:
        return "configuration error";
    case MPRSIM_ERR_MATRIX:
        return "invalid reception matrix";
    case MPRSIM_ERR_IO:
        return "i/o error";
    case MPRSIM_ERR_STATE:
        return "invalid state";
    case MPRSIM_ERR_MISMATCH:
        return "configuration mismatch";
    case MPRSIM_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

mprsim_status
mprsim_config_create(mprsim_config** out)
{
    MPRSIM_REQUIRE(out);
    return Guard([&] { *out = new mprsim_config{}; });
}

mprsim_status
mprsim_config_clone(const mprsim_config* config, mprsim_config** out)
{
    MPRSIM_REQUIRE(config);
    MPRSIM_REQUIRE(out);
    return Guard([&] { *out = new mprsim_config{config->settings, {}}; });
}

void
mprsim_config_destroy(mprsim_config* config)
{
    delete config;
}

mprsim_status
mprsim_config_set(mprsim_config* config, const char* key, const char* value)
{
    MPRSIM_REQUIRE(config);
    MPRSIM_REQUIRE(key);
    MPRSIM_REQUIRE(value);
    return Guard([&] { config->settings.Set(key, value); });
}

mprsim_status
mprsim_config_load_file(mprsim_config* config, const char* path)
{
    MPRSIM_REQUIRE(config);
    MPRSIM_REQUIRE(path);
    return Guard([&] { config->settings.LoadFile(path); });
}

mprsim_status
mprsim_config_validate(const mprsim_config* config)
{
    MPRSIM_REQUIRE(config);
    return Guard([&] { (void)config->settings.Build(); });
}

mprsim_status
mprsim_config_seed(const mprsim_config* config, uint64_t* out)
{
    MPRSIM_REQUIRE(config);
    MPRSIM_REQUIRE(out);
    *out = config->settings.Seed();
    return MPRSIM_OK;
}

mprsim_status
mprsim_config_replications(const mprsim_config* config, uint32_t* out)
{
    MPRSIM_REQUIRE(config);
    MPRSIM_REQUIRE(out);
    *out = config->settings.Replications();
    return MPRSIM_OK;
}

mprsim_status
mprsim_config_trace_path(const mprsim_config* config, const char** out)
{
    MPRSIM_REQUIRE(config);
    MPRSIM_REQUIRE(out);
    const auto& path = config->settings.TracePath();
    *out = path ? path->c_str() : nullptr;
    return MPRSIM_OK;
}

mprsim_status
mprsim_config_output(const mprsim_config* config, mprsim_output* out)
{
    MPRSIM_REQUIRE(config);
    MPRSIM_REQUIRE(out);
    const auto& format = config->settings.Output();
    if (!format)
    {
        *out = MPRSIM_OUTPUT_UNSET;
    }
    else
    {
        *out = *format == mprsim::OutputFormat::Csv ? MPRSIM_OUTPUT_CSV : MPRSIM_OUTPUT_JSON;
    }
    return MPRSIM_OK;
}

mprsim_status
mprsim_config_to_json(mprsim_config* config, const char** out)
{
    MPRSIM_REQUIRE(config);
    MPRSIM_REQUIRE(out);
    return Guard([&] {
        config->json = mprsim::ToJson(config->settings.Build()).dump(2);
        *out = config->json.c_str();
    });
}

mprsim_status
mprsim_run(const mprsim_config* config,
           uint32_t replications,
           unsigned threads,
           const char* trace_path,
           mprsim_report** out)
{
    MPRSIM_REQUIRE(config);
    MPRSIM_REQUIRE(out);
    if (replications < 1)
    {
        return Fail(MPRSIM_ERR_CONFIG, "replications must be >= 1");
    }
    return Guard([&] {
        const mprsim::SimConfig first = config->settings.Build();
        auto report = std::make_unique<mprsim_report>();
        report->config_echo = mprsim::ToJson(first);
        if (trace_path != nullptr)
        {
            std::ofstream trace(trace_path);
            if (!trace)
            {
                throw mprsim::IoError(std::string("cannot open trace file '") + trace_path + "'");
            }
            report->reports.push_back(mprsim::RunSimulation(first, &trace));
            if (replications > 1)
            {
                mprsim::ConfigSettings rest = config->settings;
                rest.Set("seed", std::to_string(config->settings.Seed() + 1));
                auto more = mprsim::RunReplications(rest, replications - 1, threads);
                report->reports.insert(report->reports.end(), more.begin(), more.end());
            }
        }
        else
        {
            report->reports = mprsim::RunReplications(config->settings, replications, threads);
        }
        report->summary = mprsim::AggregateReplications(report->reports);
        *out = report.release();
    });
}

void
mprsim_report_destroy(mprsim_report* report)
{
    delete report;
}

mprsim_status
mprsim_report_count(const mprsim_report* report, size_t* out)
{
    MPRSIM_REQUIRE(report);
    MPRSIM_REQUIRE(out);
    *out = report->reports.size();
    return MPRSIM_OK;
}

mprsim_status
mprsim_report_metrics(const mprsim_report* report, size_t replication, mprsim_metrics* out)
{
    MPRSIM_REQUIRE(report);
    MPRSIM_REQUIRE(out);
    if (replication >= report->reports.size())
    {
        return Fail(MPRSIM_ERR_ARGUMENT, "replication index out of range");
    }
    const auto& r = report->reports[replication];
    *out = mprsim_metrics{r.normalized_throughput,
                          r.mean_mac_delay_us,
                          r.transmission_efficiency,
                          r.delivered,
                          r.dropped,
                          r.attempts,
                          r.sim_time_us,
                          r.seed,
                          r.totals.enqueued,
                          r.totals.delivered,
                          r.totals.dropped,
                          r.totals.still_queued};
    return MPRSIM_OK;
}

mprsim_status
mprsim_report_summary(const mprsim_report* report, mprsim_summary* out)
{
    MPRSIM_REQUIRE(report);
    MPRSIM_REQUIRE(out);
    *out = ToC(report->summary);
    return MPRSIM_OK;
}

mprsim_status
mprsim_report_to_json(mprsim_report* report, const char** out)
{
    MPRSIM_REQUIRE(report);
    MPRSIM_REQUIRE(out);
    return Guard([&] {
        nlohmann::json j;
        j["config"] = report->config_echo;
        if (report->reports.size() == 1)
        {
            j["report"] = mprsim::ToJson(report->reports.front());
        }
        else
        {
            auto list = nlohmann::json::array();
            for (const auto& r : report->reports)
            {
                list.push_back(mprsim::ToJson(r, false));
            }
            j["replications"] = std::move(list);
            j["summary"] = mprsim::ToJson(report->summary);
        }
        report->text = j.dump(2) + "\n";
        *out = report->text.c_str();
    });
}

mprsim_status
mprsim_report_to_csv(mprsim_report* report, const char** out)
{
    MPRSIM_REQUIRE(report);
    MPRSIM_REQUIRE(out);
    return Guard([&] {
        std::ostringstream os;
        os << "seed,throughput,delay_us,eta,delivered,dropped,attempts\n";
        for (const auto& r : report->reports)
        {
            os << r.seed << ',' << mprsim::FormatNumber(r.normalized_throughput) << ','
               << mprsim::FormatNumber(r.mean_mac_delay_us) << ','
               << mprsim::FormatNumber(r.transmission_efficiency) << ',' << r.delivered << ','
               << r.dropped << ',' << r.attempts << '\n';
        }
        report->text = os.str();
        *out = report->text.c_str();
    });
}

mprsim_status
mprsim_report_to_key_value(mprsim_report* report, size_t replication, const char** out)
{
    MPRSIM_REQUIRE(report);
    MPRSIM_REQUIRE(out);
    if (replication >= report->reports.size())
    {
        return Fail(MPRSIM_ERR_ARGUMENT, "replication index out of range");
    }
    report->text = mprsim::ToKeyValue(report->reports[replication]);
    *out = report->text.c_str();
    return MPRSIM_OK;
}

mprsim_status
mprsim_sweep_run(const mprsim_config* base,
                 const char* parameter,
                 const double* values,
                 size_t value_count,
                 uint32_t replications,
                 unsigned threads,
                 mprsim_sweep** out)
{
    MPRSIM_REQUIRE(base);
    MPRSIM_REQUIRE(parameter);
    MPRSIM_REQUIRE(out);
    if (value_count > 0)
    {
        MPRSIM_REQUIRE(values);
    }
    const auto which = mprsim::ParseSweepParameter(parameter);
    if (!which)
    {
        return Fail(MPRSIM_ERR_CONFIG,
                    std::string("unknown sweep parameter '") + parameter +
                        "' (expected u, n, k, threshold or cwmin)");
    }
    return Guard([&] {
        mprsim::SweepSpec spec;
        spec.base = base->settings;
        spec.parameter = *which;
        spec.values.assign(values, values + value_count);
        spec.replications = replications;
        auto sweep = std::make_unique<mprsim_sweep>();
        sweep->parameter = *which;
        sweep->rows = mprsim::RunSweep(spec, threads);
        *out = sweep.release();
    });
}

void
mprsim_sweep_destroy(mprsim_sweep* sweep)
{
    delete sweep;
}

mprsim_status
mprsim_sweep_row_count(const mprsim_sweep* sweep, size_t* out)
{
    MPRSIM_REQUIRE(sweep);
    MPRSIM_REQUIRE(out);
    *out = sweep->rows.size();
    return MPRSIM_OK;
}

mprsim_status
mprsim_sweep_get_row(const mprsim_sweep* sweep, size_t index, mprsim_sweep_row* out)
{
    MPRSIM_REQUIRE(sweep);
    MPRSIM_REQUIRE(out);
    if (index >= sweep->rows.size())
    {
        return Fail(MPRSIM_ERR_ARGUMENT, "sweep row index out of range");
    }
    out->swept_value = sweep->rows[index].value;
    out->summary = ToC(sweep->rows[index].summary);
    return MPRSIM_OK;
}

mprsim_status
mprsim_sweep_to_csv(mprsim_sweep* sweep, const char** out)
{
    MPRSIM_REQUIRE(sweep);
    MPRSIM_REQUIRE(out);
    return Guard([&] {
        sweep->text = mprsim::SweepCsv(sweep->rows);
        *out = sweep->text.c_str();
    });
}

mprsim_status
mprsim_sweep_to_json(mprsim_sweep* sweep, const char** out)
{
    MPRSIM_REQUIRE(sweep);
    MPRSIM_REQUIRE(out);
    return Guard([&] {
        sweep->text = mprsim::SweepJson(sweep->rows, sweep->parameter).dump(2) + "\n";
        *out = sweep->text.c_str();
    });
}

mprsim_status
mprsim_matrix_load_file(const char* path, mprsim_matrix** out)
{
    MPRSIM_REQUIRE(path);
    MPRSIM_REQUIRE(out);
    return Guard([&] { *out = new mprsim_matrix{mprsim::LoadMatrixFile(path)}; });
}

mprsim_status
mprsim_matrix_parse(const char* text, mprsim_matrix** out)
{
    MPRSIM_REQUIRE(text);
    MPRSIM_REQUIRE(out);
    return Guard([&] {
        std::istringstream in(text);
        *out = new mprsim_matrix{mprsim::ParseMatrix(in)};
    });
}

void
mprsim_matrix_destroy(mprsim_matrix* matrix)
{
    delete matrix;
}

mprsim_status
mprsim_matrix_size(const mprsim_matrix* matrix, size_t* out)
{
    MPRSIM_REQUIRE(matrix);
    MPRSIM_REQUIRE(out);
    *out = matrix->matrix.MaxTransmissions();
    return MPRSIM_OK;
}

mprsim_status
mprsim_matrix_expected_successes(const mprsim_matrix* matrix, size_t transmissions, double* out)
{
    MPRSIM_REQUIRE(matrix);
    MPRSIM_REQUIRE(out);
    return Guard([&] { *out = mprsim::ExpectedSuccesses(matrix->matrix, transmissions); });
}

mprsim_status
mprsim_matrix_kequiv(const mprsim_matrix* matrix, mprsim_tie_rule rule, size_t* out)
{
    MPRSIM_REQUIRE(matrix);
    MPRSIM_REQUIRE(out);
    if (rule != MPRSIM_TIE_MINIMUM && rule != MPRSIM_TIE_MIDDLE)
    {
        return Fail(MPRSIM_ERR_ARGUMENT, "unknown tie rule");
    }
    return Guard([&] {
        *out = mprsim::KEquiv(matrix->matrix,
                              rule == MPRSIM_TIE_MINIMUM ? mprsim::TieRule::Minimum
                                                         : mprsim::TieRule::Middle);
    });
}

int
mprsim_kmpr_success(size_t concurrent, size_t k)
{
    return mprsim::KMprSuccess(concurrent, k) ? 1 : 0;
}

} // extern "C"
