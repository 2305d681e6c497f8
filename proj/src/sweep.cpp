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

#include "mprsim/sweep.hpp"

#include "mprsim/engine.hpp"
#include "mprsim/errors.hpp"
#include "mprsim/format.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace mprsim
{

namespace
{

std::string
IntegerText(double value, const char* name)
{
    if (!(value >= 0) || value != std::floor(value) || value > 4e9)
    {
        throw ConfigError(std::string("sweep value ") + FormatNumber(value) + " for '" + name +
                          "' is not a non-negative integer");
    }
    return std::to_string(static_cast<std::uint64_t>(value));
}

// Runs jobs [0, count) on a small pool; rethrows the first failure.
template <typename Job>
void
ParallelFor(std::size_t count, unsigned threads, Job job)
{
    if (threads == 0)
    {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
        {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
    {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
            {
                try
                {
                    job(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                    {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& worker : pool)
    {
        worker.join();
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
}

nlohmann::json
Stat(const MeanStd& s)
{
    return {{"mean", RoundSignificant(s.mean)}, {"std", RoundSignificant(s.std)}};
}

} // namespace

std::optional<SweepParameter>
ParseSweepParameter(std::string_view name)
{
    if (name == "u")
    {
        return SweepParameter::OfferedLoad;
    }
    if (name == "n" || name == "n_stations" || name == "n-stations")
    {
        return SweepParameter::Stations;
    }
    if (name == "k" || name == "mpr_k" || name == "mpr-k")
    {
        return SweepParameter::MprK;
    }
    if (name == "threshold")
    {
        return SweepParameter::Threshold;
    }
    if (name == "cwmin" || name == "cw_min" || name == "cw-min")
    {
        return SweepParameter::CwMin;
    }
    return std::nullopt;
}

std::string
ToString(SweepParameter parameter)
{
    switch (parameter)
    {
    case SweepParameter::OfferedLoad:
        return "u";
    case SweepParameter::Stations:
        return "n_stations";
    case SweepParameter::MprK:
        return "mpr_k";
    case SweepParameter::Threshold:
        return "threshold";
    case SweepParameter::CwMin:
        return "cw_min";
    }
    return "?";
}

ConfigSettings
SweepPoint(const SweepSpec& spec, std::size_t index)
{
    ConfigSettings settings = spec.base;
    const double value = spec.values.at(index);
    switch (spec.parameter)
    {
    case SweepParameter::OfferedLoad:
        settings.Set("u", FormatShortest(value));
        break;
    case SweepParameter::Stations:
        settings.Set("n", IntegerText(value, "n_stations"));
        break;
    case SweepParameter::MprK:
        settings.Set("k", IntegerText(value, "mpr_k"));
        break;
    case SweepParameter::Threshold:
        if (settings.Policy() == PolicyKind::Adaptive)
        {
            settings.Set("kt", IntegerText(value, "threshold"));
        }
        else if (settings.Policy() == PolicyKind::Threshold)
        {
            settings.Set("lt", IntegerText(value, "threshold"));
        }
        else
        {
            throw ConfigError("policy dcf has no threshold to sweep");
        }
        break;
    case SweepParameter::CwMin:
        settings.Set("cwmin", IntegerText(value, "cw_min"));
        break;
    }
    settings.Set("seed", std::to_string(spec.base.Seed() + index * kSweepSeedStride));
    return settings;
}

std::vector<MetricsReport>
RunReplications(const ConfigSettings& settings, std::uint32_t replications, unsigned threads)
{
    std::vector<SimConfig> configs;
    for (std::uint32_t r = 0; r < replications; ++r)
    {
        SimConfig config = settings.Build();
        config.seed = settings.Seed() + r;
        configs.push_back(config);
    }
    std::vector<MetricsReport> reports(configs.size());
    ParallelFor(configs.size(), threads, [&](std::size_t i) { reports[i] = RunSimulation(configs[i]); });
    return reports;
}

std::vector<SweepRow>
RunSweep(const SweepSpec& spec, unsigned threads)
{
    if (spec.values.empty())
    {
        throw ConfigError("sweep needs at least one value");
    }
    if (spec.replications < 1)
    {
        throw ConfigError("sweep needs at least one replication");
    }
    std::vector<SimConfig> configs;
    for (std::size_t s = 0; s < spec.values.size(); ++s)
    {
        const ConfigSettings point = SweepPoint(spec, s);
        for (std::uint32_t r = 0; r < spec.replications; ++r)
        {
            SimConfig config = point.Build();
            config.seed = point.Seed() + r;
            configs.push_back(config);
        }
    }

    std::vector<MetricsReport> reports(configs.size());
    ParallelFor(configs.size(), threads, [&](std::size_t i) { reports[i] = RunSimulation(configs[i]); });

    std::vector<SweepRow> rows(spec.values.size());
    for (std::size_t s = 0; s < rows.size(); ++s)
    {
        rows[s].value = spec.values[s];
        const auto first = reports.begin() + static_cast<std::ptrdiff_t>(s * spec.replications);
        rows[s].reports.assign(first, first + spec.replications);
        rows[s].summary = AggregateReplications(rows[s].reports);
    }
    return rows;
}

std::string
SweepCsv(std::span<const SweepRow> rows)
{
    std::ostringstream os;
    os << "swept_value,throughput_mean,throughput_std,delay_mean_us,delay_std_us,eta_mean,eta_std,"
          "dropped_mean,replications\n";
    for (const auto& row : rows)
    {
        const auto& s = row.summary;
        os << FormatNumber(row.value) << ',' << FormatNumber(s.throughput.mean) << ','
           << FormatNumber(s.throughput.std) << ',' << FormatNumber(s.delay_us.mean) << ','
           << FormatNumber(s.delay_us.std) << ',' << FormatNumber(s.eta.mean) << ','
           << FormatNumber(s.eta.std) << ',' << FormatNumber(s.dropped.mean) << ','
           << s.replications << '\n';
    }
    return os.str();
}

nlohmann::json
ToJson(const ReplicationSummary& s)
{
    return {
        {"throughput", Stat(s.throughput)},
        {"delay_us", Stat(s.delay_us)},
        {"eta", Stat(s.eta)},
        {"dropped", Stat(s.dropped)},
        {"delivered", Stat(s.delivered)},
        {"attempts", Stat(s.attempts)},
        {"replications", s.replications},
    };
}

nlohmann::json
SweepJson(std::span<const SweepRow> rows, SweepParameter parameter)
{
    nlohmann::json out;
    out["swept_parameter"] = ToString(parameter);
    out["rows"] = nlohmann::json::array();
    for (const auto& row : rows)
    {
        auto j = ToJson(row.summary);
        j["swept_value"] = RoundSignificant(row.value);
        out["rows"].push_back(std::move(j));
    }
    return out;
}

nlohmann::json
ToJson(const MetricsReport& r, bool per_node)
{
    nlohmann::json j;
    j["normalized_throughput"] = RoundSignificant(r.normalized_throughput);
    j["mean_mac_delay_us"] = RoundSignificant(r.mean_mac_delay_us);
    j["mean_mac_delay_ms"] = RoundSignificant(r.mean_mac_delay_us / 1000.0);
    j["transmission_efficiency"] = RoundSignificant(r.transmission_efficiency);
    j["delivered"] = r.delivered;
    j["dropped"] = r.dropped;
    j["attempts"] = r.attempts;
    j["sim_time_us"] = RoundSignificant(r.sim_time_us);
    j["seed"] = r.seed;
    j["totals"] = {
        {"enqueued", r.totals.enqueued},
        {"delivered", r.totals.delivered},
        {"dropped", r.totals.dropped},
        {"still_queued", r.totals.still_queued},
    };
    if (per_node)
    {
        auto nodes = nlohmann::json::array();
        for (const auto& n : r.per_node)
        {
            nodes.push_back({
                {"normalized_throughput", RoundSignificant(n.normalized_throughput)},
                {"mean_mac_delay_us", RoundSignificant(n.mean_mac_delay_us)},
                {"transmission_efficiency", RoundSignificant(n.transmission_efficiency)},
                {"delivered", n.delivered},
                {"dropped", n.dropped},
                {"attempts", n.attempts},
            });
        }
        j["per_node"] = std::move(nodes);
    }
    return j;
}

} // namespace mprsim
